#include "rashomon/cli.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "rashomon/dataset.hpp"
#include "rashomon/enumerator.hpp"
#include "rashomon/error.hpp"
#include "rashomon/lawler.hpp"
#include "rashomon/metrics.hpp"
#include "rashomon/optimizer.hpp"
#include "rashomon/serialization.hpp"
#include "rashomon/vocabulary.hpp"

namespace rashomon::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Raised for argument combinations CLI11 cannot express; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a run stopped at its time budget after writing partial output.
struct PartialRun {
  std::string message;
};

struct DataArgs {
  std::string data;
  std::string label_col = "label";
  std::string sensitive_col;
  std::string terms;
  bool mine = false;
  std::size_t mine_max_len = 1;
  double min_pos_coverage = 0.5;
  double train_fraction = 1.0;
  std::uint64_t seed = 0;
};

struct SearchArgs {
  std::size_t max_len = 3;
  double lambda = 0.015;
  std::size_t min_capture = 1;
  std::optional<double> timeout_s;
  std::size_t threads = 1;
  bool no_prune_lower_bound = false;
  bool no_prune_min_support = false;
  bool no_prune_symmetry = false;
  std::string objective = "risk";
};

// Training and held-out views of the input with matching term captures.
struct Inputs {
  LoadedData full;
  BinaryDataset train;
  BinaryDataset test;
  std::optional<SensitiveVector> train_sensitive;
  std::optional<SensitiveVector> test_sensitive;
  Vocabulary train_vocab;
  Vocabulary test_vocab;
  bool has_test = false;
};

void add_data_options(CLI::App& cmd, DataArgs& a, bool with_terms) {
  cmd.add_option("--data", a.data, "Binary CSV dataset")->required();
  cmd.add_option("--label-col", a.label_col, "Label column name")->capture_default_str();
  cmd.add_option("--sensitive-col", a.sensitive_col, "Sensitive attribute column name");
  cmd.add_option("--train-fraction", a.train_fraction,
                 "Fraction of rows used for training (rest held out)")
      ->capture_default_str();
  cmd.add_option("--seed", a.seed, "Seed for the train/test shuffle")->capture_default_str();
  if (with_terms) {
    cmd.add_option("--terms", a.terms, "Term capture file");
    cmd.add_flag("--mine", a.mine, "Mine terms from the training data instead of --terms");
    cmd.add_option("--mine-max-len", a.mine_max_len, "Longest mined conjunction")
        ->capture_default_str();
    cmd.add_option("--min-pos-coverage", a.min_pos_coverage,
                   "Minimum fraction of positives a mined term must cover")
        ->capture_default_str();
  }
}

void add_search_options(CLI::App& cmd, SearchArgs& s) {
  cmd.add_option("--max-len", s.max_len, "Maximum rule list length, default rule included")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--lambda", s.lambda, "Length penalty")->capture_default_str();
  cmd.add_option("--min-capture", s.min_capture,
                 "Examples each non-default rule must newly capture")
      ->capture_default_str();
  cmd.add_option("--timeout-s", s.timeout_s, "Wall-clock budget in seconds");
}

void add_enum_options(CLI::App& cmd, SearchArgs& s) {
  cmd.add_option("--threads", s.threads, "Worker threads for the enumerator")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--no-prune-lower-bound", s.no_prune_lower_bound);
  cmd.add_flag("--no-prune-min-support", s.no_prune_min_support);
  cmd.add_flag("--no-prune-symmetry", s.no_prune_symmetry);
  cmd.add_option("--objective", s.objective, "Score used for membership: risk or regularized")
      ->capture_default_str()
      ->check(CLI::IsMember({"risk", "regularized"}));
}

Prunings prunings_of(const SearchArgs& s) {
  return {!s.no_prune_lower_bound, !s.no_prune_min_support, !s.no_prune_symmetry};
}

ObjectiveMode mode_of(const SearchArgs& s) {
  return s.objective == "regularized" ? ObjectiveMode::kRegularized : ObjectiveMode::kRisk;
}

std::optional<Seconds> timeout_of(const SearchArgs& s) {
  if (!s.timeout_s) return std::nullopt;
  if (*s.timeout_s < 0) throw UsageError("--timeout-s must be nonnegative");
  return Seconds(*s.timeout_s);
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0)) throw UsageError("--lambda must be nonnegative");
}

BitVector select_bits(const BitVector& v, const std::vector<std::size_t>& rows) {
  BitVector out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.set(i, v.test(rows[i]));
  return out;
}

Vocabulary restrict_vocabulary(const Vocabulary& vocab, const std::vector<std::size_t>& rows) {
  std::vector<Term> terms;
  terms.reserve(vocab.size());
  for (const auto& t : vocab.terms()) {
    terms.push_back(Term{0, t.name, t.feature_indices, select_bits(t.capture, rows)});
  }
  return Vocabulary(std::move(terms), rows.size());
}

std::optional<std::string> opt_string(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

Inputs load_inputs(const DataArgs& a, bool need_terms) {
  Inputs in;
  in.full = load_csv(a.data, a.label_col, opt_string(a.sensitive_col));
  const std::size_t n = in.full.dataset.n_examples();

  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  if (a.train_fraction == 1.0) {
    train_rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) train_rows[i] = i;
    in.train = in.full.dataset;
    in.train_sensitive = in.full.sensitive;
  } else {
    Split s = split(in.full.dataset, a.train_fraction, a.seed);
    train_rows = std::move(s.train_rows);
    test_rows = std::move(s.test_rows);
    in.train = std::move(s.train);
    in.test = std::move(s.test);
    in.has_test = !s.test_empty;
    if (in.full.sensitive) {
      in.train_sensitive = in.full.sensitive->select(train_rows);
      in.test_sensitive = in.full.sensitive->select(test_rows);
    }
  }

  if (!need_terms) return in;
  if (a.terms.empty() == !a.mine) {
    throw UsageError("exactly one of --terms or --mine is required");
  }
  Vocabulary full_vocab;
  if (a.mine) {
    const Vocabulary mined = mine_terms(in.train, a.mine_max_len, a.min_pos_coverage);
    std::vector<Term> terms;
    for (const auto& t : mined.terms()) {
      terms.push_back(Term{0, t.name, t.feature_indices,
                           term_capture(*t.feature_indices, in.full.dataset)});
    }
    full_vocab = Vocabulary(std::move(terms), n);
  } else {
    full_vocab = load_terms_file(a.terms, n);
  }
  in.train_vocab = restrict_vocabulary(full_vocab, train_rows);
  if (in.has_test) in.test_vocab = restrict_vocabulary(full_vocab, test_rows);
  return in;
}

Json data_manifest(const DataArgs& a, const Inputs& in) {
  Json j;
  j["data"] = a.data;
  j["label_col"] = a.label_col;
  j["sensitive_col"] = a.sensitive_col.empty() ? Json() : Json(a.sensitive_col);
  j["terms"] = a.terms.empty() ? Json() : Json(a.terms);
  j["mine"] = a.mine;
  if (a.mine) {
    j["mine_max_len"] = a.mine_max_len;
    j["min_pos_coverage"] = a.min_pos_coverage;
  }
  j["train_fraction"] = a.train_fraction;
  j["seed"] = a.seed;
  j["n_examples"] = in.train.n_examples();
  j["n_terms"] = in.train_vocab.size();
  return j;
}

Json search_manifest(const SearchArgs& s) {
  Json j;
  j["max_len"] = s.max_len;
  j["lambda"] = s.lambda;
  j["min_capture"] = s.min_capture;
  j["timeout_s"] = s.timeout_s ? Json(*s.timeout_s) : Json();
  j["threads"] = s.threads;
  j["objective"] = s.objective;
  j["prune"] = {{"lower_bound", !s.no_prune_lower_bound},
                {"min_support", !s.no_prune_min_support},
                {"symmetry", !s.no_prune_symmetry}};
  return j;
}

Json manifest(const std::string& command, Json inputs, Json parameters,
              std::uint64_t fingerprint) {
  Json j;
  j["command"] = command;
  j["inputs"] = std::move(inputs);
  j["parameters"] = std::move(parameters);
  j["tool_version"] = kToolVersion;
  j["dataset_fingerprint"] = fingerprint;
  return j;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return f;
}

void write_json_file(const fs::path& path, const Json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

void write_sidecar(const fs::path& path, const Json& m) {
  write_json_file(fs::path(path.string() + ".manifest.json"), m);
}

// Writes to --out when given, otherwise to the command's stdout.
void emit_json(const std::string& out_path, const Json& j, std::ostream& out) {
  if (out_path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_json_file(out_path, j);
  }
}

long peak_rss_kb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss;
}

OptOptions opt_options(const SearchArgs& s, std::optional<Seconds> timeout) {
  OptOptions o;
  o.max_total_len = s.max_len;
  o.lambda = s.lambda;
  o.min_capture = s.min_capture;
  o.timeout = timeout;
  return o;
}

RuleList read_rule_list_file(const std::string& path, const Vocabulary& vocab) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kIo, "cannot read " + path);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedInput, path + ": " + e.what());
  }
  // Accept either a bare rule list or a fit output carrying one under "best".
  if (j.is_object() && j.contains("best")) j = j["best"];
  return rule_list_from_json(j, vocab);
}

std::vector<double> checked_epsilons(std::vector<double> eps) {
  for (double e : eps) {
    if (!(e >= 0.0 && e <= 1.0)) {
      throw Error(ErrorCode::kInvalidFraction, "epsilon must lie in [0, 1]");
    }
  }
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  return eps;
}

// ---------------------------------------------------------------- mine

struct MineArgs {
  DataArgs data;
  std::string out;
};

int cmd_mine(const MineArgs& a, std::ostream& out) {
  if (!(a.data.min_pos_coverage >= 0.0 && a.data.min_pos_coverage <= 1.0)) {
    throw Error(ErrorCode::kInvalidFraction, "--min-pos-coverage must lie in [0, 1]");
  }
  DataArgs d = a.data;
  d.mine = true;
  d.terms.clear();
  const Inputs in = load_inputs(d, true);
  // Captures are written against every row of the input file.
  std::vector<Term> terms;
  for (const auto& t : in.train_vocab.terms()) {
    terms.push_back(Term{0, t.name, t.feature_indices,
                         term_capture(*t.feature_indices, in.full.dataset)});
  }
  const Vocabulary vocab(std::move(terms), in.full.dataset.n_examples());
  Json params = {{"mine_max_len", d.mine_max_len}, {"min_pos_coverage", d.min_pos_coverage}};
  const Json m = manifest("mine", data_manifest(d, in), params, in.full.dataset.fingerprint());
  if (a.out.empty()) {
    for (const auto& t : vocab.terms()) {
      out << '{' << t.name << '}';
      for (std::size_t i = 0; i < t.capture.size(); ++i) out << ' ' << (t.capture.test(i) ? 1 : 0);
      out << '\n';
    }
  } else {
    write_terms_file(a.out, vocab);
    write_sidecar(a.out, m);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  DataArgs data;
  SearchArgs search;
  std::string out;
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
  check_lambda(a.search.lambda);
  const Inputs in = load_inputs(a.data, true);
  const OptResult r =
      fit_optimal(in.train, in.train_vocab, opt_options(a.search, timeout_of(a.search)));
  Json j = opt_result_to_json(r, in.train_vocab, in.train.n_examples(), a.search.lambda);
  j["manifest"] = manifest("fit", data_manifest(a.data, in), search_manifest(a.search),
                           in.train.fingerprint());
  emit_json(a.out, j, out);
  if (!r.complete) throw PartialRun{"fit stopped at the time budget; result is the incumbent"};
  return kExitOk;
}

// ---------------------------------------------------------------- enumerate

struct EnumArgs {
  DataArgs data;
  SearchArgs search;
  std::vector<double> epsilons;
  std::optional<std::int64_t> threshold_errors;
  std::string reference;
  bool sorted = false;
  std::string out;
  std::string stats;
};

int cmd_enumerate(const EnumArgs& a, std::ostream& out) {
  check_lambda(a.search.lambda);
  if (a.epsilons.empty() == !a.threshold_errors) {
    throw UsageError("exactly one of --epsilon or --threshold-errors is required");
  }
  if (a.threshold_errors && a.search.objective != "risk") {
    throw UsageError("--threshold-errors counts misclassifications and needs --objective risk");
  }
  const auto eps = checked_epsilons(a.epsilons);
  const Inputs in = load_inputs(a.data, true);
  const auto start = Clock::now();
  const auto budget = timeout_of(a.search);
  const std::size_t n = in.train.n_examples();

  std::ofstream file;
  std::ostream* sink_stream = &out;
  if (!a.out.empty()) {
    file = open_out(a.out);
    sink_stream = &file;
  }

  Json params = search_manifest(a.search);
  params["epsilons"] = eps;
  params["threshold_errors"] = a.threshold_errors ? Json(*a.threshold_errors) : Json();
  params["reference"] = a.reference.empty() ? Json() : Json(a.reference);
  params["sorted"] = a.sorted;
  const Json m =
      manifest("enumerate", data_manifest(a.data, in), params, in.train.fingerprint());

  Json stats_json;
  EnumStats stats;
  if (a.threshold_errors) {
    EnumConfig cfg;
    cfg.max_total_len = a.search.max_len;
    cfg.cost = CostModel::risk(n);
    cfg.threshold = *a.threshold_errors;
    cfg.min_capture = a.search.min_capture;
    cfg.prunings = prunings_of(a.search);
    cfg.emit_order = a.sorted ? EmitOrder::kSorted : EmitOrder::kDfs;
    cfg.threads = a.search.threads;
    cfg.timeout = budget;
    stats = enumerate_rashomon(in.train, in.train_vocab, cfg, [&](const Solution& s) {
      Json line = solution_to_json(s, in.train_vocab);
      // Keep the lambda-weighted objective consistent with the other commands.
      line["objective"] = s.risk + a.search.lambda * static_cast<double>(s.list.length());
      *sink_stream << line.dump() << '\n';
    });
    stats_json = enum_stats_to_json(stats);
    stats_json["threshold_errors"] = *a.threshold_errors;
  } else {
    RuleList reference;
    bool reference_fit = false;
    if (!a.reference.empty()) {
      reference = read_rule_list_file(a.reference, in.train_vocab);
    } else {
      const OptResult fit = fit_optimal(in.train, in.train_vocab, opt_options(a.search, budget));
      if (!fit.complete) {
        Json partial;
        partial["complete"] = false;
        partial["reason"] = "reference fit stopped at the time budget";
        partial["manifest"] = m;
        if (!a.out.empty()) {
          write_sidecar(a.out, m);
          write_json_file(a.stats.empty() ? a.out + ".stats.json" : a.stats, partial);
        }
        throw PartialRun{"reference fit did not finish inside the budget; nothing enumerated"};
      }
      reference = fit.best;
      reference_fit = true;
    }
    SweepOptions so;
    so.max_total_len = a.search.max_len;
    so.mode = mode_of(a.search);
    so.lambda = a.search.lambda;
    so.min_capture = a.search.min_capture;
    so.prunings = prunings_of(a.search);
    so.threads = a.search.threads;
    so.emit_order = a.sorted ? EmitOrder::kSorted : EmitOrder::kDfs;
    if (budget) {
      so.timeout = std::max(Seconds(0), *budget - Seconds(Clock::now() - start));
    }
    std::vector<std::size_t> per_bucket(eps.size(), 0);
    std::vector<std::int64_t> thresholds;
    stats = sweep_tolerances(
        in.train, in.train_vocab, reference, eps, so,
        [&](const Solution& s, std::size_t bucket) {
          ++per_bucket[bucket];
          Json line = solution_to_json(s, in.train_vocab);
          line["objective"] = s.risk + a.search.lambda * static_cast<double>(s.list.length());
          line["epsilon"] = eps[bucket];
          *sink_stream << line.dump() << '\n';
        },
        &thresholds);
    std::vector<std::size_t> counts(per_bucket);
    for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
    const std::size_t ref_errors =
        misclassification_count(reference, in.train_vocab, in.train.labels());
    stats_json = enum_stats_to_json(stats);
    stats_json["reference"] =
        rule_list_to_json(reference, in.train_vocab, ref_errors, n, a.search.lambda);
    stats_json["reference_fitted"] = reference_fit;
    stats_json["epsilons"] = eps;
    stats_json["thresholds"] = thresholds;
    stats_json["counts"] = counts;
  }
  stats_json["objective_mode"] = a.search.objective;
  stats_json["peak_rss_kb"] = peak_rss_kb();
  stats_json["manifest"] = m;

  sink_stream->flush();
  if (!a.out.empty()) {
    write_sidecar(a.out, m);
    write_json_file(a.stats.empty() ? a.out + ".stats.json" : a.stats, stats_json);
  } else if (!a.stats.empty()) {
    write_json_file(a.stats, stats_json);
  }
  if (!stats.complete) throw PartialRun{"enumeration stopped at the time budget"};
  return kExitOk;
}

// ---------------------------------------------------------------- topk

TopKBranching branching_of(const std::string& name) {
  return name == "partition" ? TopKBranching::kPartition : TopKBranching::kRemoveTerm;
}

struct TopKArgs {
  DataArgs data;
  SearchArgs search;
  std::size_t k = 10;
  std::string branching = "remove";
  std::string out;
};

int cmd_topk(const TopKArgs& a, std::ostream& out) {
  check_lambda(a.search.lambda);
  if (a.k < 1) throw UsageError("--k must be at least 1");
  const Inputs in = load_inputs(a.data, true);
  TopKOptions o;
  o.max_total_len = a.search.max_len;
  o.lambda = a.search.lambda;
  o.k = a.k;
  o.min_capture = a.search.min_capture;
  o.branching = branching_of(a.branching);
  o.timeout = timeout_of(a.search);
  const TopKResult r = topk(in.train, in.train_vocab, o);
  Json j = topk_to_json(r, in.train_vocab);
  Json params = search_manifest(a.search);
  params["k"] = a.k;
  params["branching"] = a.branching;
  j["manifest"] = manifest("topk", data_manifest(a.data, in), params, in.train.fingerprint());
  emit_json(a.out, j, out);
  if (!r.complete) throw PartialRun{"top-k search stopped at the time budget"};
  return kExitOk;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  DataArgs data;
  SearchArgs search;
  double epsilon = 0.01;
  std::size_t k = 0;
  double budget_s = 60.0;
  std::string branching = "remove";
  std::string out_dir = ".";
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  check_lambda(a.search.lambda);
  if (!(a.budget_s >= 0.0)) throw UsageError("--budget-s must be nonnegative");
  checked_epsilons({a.epsilon});
  const Inputs in = load_inputs(a.data, true);
  const std::size_t n = in.train.n_examples();
  const Seconds budget(a.budget_s);
  const CostModel regularized(ObjectiveMode::kRegularized, n, Lambda::from_double(a.search.lambda));

  // Enumerator: reference fit and enumeration share one budget.
  Json enum_json;
  std::map<std::vector<TermId>, std::int64_t> best_by_terms;
  std::size_t enum_models = 0;
  bool enum_complete = false;
  {
    const auto start = Clock::now();
    const OptResult fit = fit_optimal(in.train, in.train_vocab, opt_options(a.search, budget));
    EnumStats stats;
    stats.complete = false;
    if (fit.complete) {
      SweepOptions so;
      so.max_total_len = a.search.max_len;
      so.mode = mode_of(a.search);
      so.lambda = a.search.lambda;
      so.min_capture = a.search.min_capture;
      so.prunings = prunings_of(a.search);
      so.threads = a.search.threads;
      so.timeout = std::max(Seconds(0), budget - Seconds(Clock::now() - start));
      stats = sweep_tolerances(in.train, in.train_vocab, fit.best, {a.epsilon}, so,
                               [&](const Solution& s, std::size_t) {
                                 ++enum_models;
                                 const auto key = term_set(s.list);
                                 const auto score = regularized.cost(s.errors, s.list.length());
                                 auto [it, inserted] = best_by_terms.emplace(key, score);
                                 if (!inserted) it->second = std::min(it->second, score);
                               });
    }
    enum_complete = fit.complete && stats.complete;
    enum_json["complete"] = enum_complete;
    enum_json["models"] = enum_models;
    enum_json["distinct_term_sets"] = best_by_terms.size();
    enum_json["elapsed_s"] = Seconds(Clock::now() - start).count();
    enum_json["candidates_visited"] = stats.candidates_visited;
    enum_json["workspace_bytes"] = stats.peak_live_bytes;
    enum_json["peak_rss_kb"] = peak_rss_kb();
  }

  Json lawler_json;
  TopKResult lawler;
  {
    TopKOptions o;
    o.max_total_len = a.search.max_len;
    o.lambda = a.search.lambda;
    o.k = a.k == 0 ? std::numeric_limits<std::size_t>::max() : a.k;
    o.min_capture = a.search.min_capture;
    o.branching = branching_of(a.branching);
    o.timeout = budget;
    lawler = topk(in.train, in.train_vocab, o);
    lawler_json["complete"] = lawler.complete;
    lawler_json["models"] = lawler.answers.size();
    lawler_json["elapsed_s"] = lawler.stats.elapsed.count();
    lawler_json["pops"] = lawler.stats.pops;
    lawler_json["refits"] = lawler.stats.refits;
    lawler_json["seen_set_bytes"] = lawler.stats.seen_set_bytes;
    lawler_json["workspace_bytes"] = lawler.stats.seen_set_bytes + lawler.stats.queue_bytes;
    lawler_json["peak_rss_kb"] = peak_rss_kb();
  }

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  Json params = search_manifest(a.search);
  params["epsilon"] = a.epsilon;
  params["k"] = a.k;
  params["budget_s"] = a.budget_s;
  params["branching"] = a.branching;
  const Json m = manifest("compare", data_manifest(a.data, in), params, in.train.fingerprint());

  {
    std::vector<std::int64_t> enum_scores;
    for (const auto& [terms, score] : best_by_terms) enum_scores.push_back(score);
    std::sort(enum_scores.begin(), enum_scores.end());
    auto f = open_out(dir / "compare_series.csv");
    f << "rank,objective,method\n";
    for (std::size_t i = 0; i < enum_scores.size(); ++i) {
      f << i + 1 << ',' << Json(regularized.to_real(enum_scores[i])).dump() << ",enumerate\n";
    }
    for (std::size_t i = 0; i < lawler.answers.size(); ++i) {
      f << i + 1 << ',' << Json(lawler.answers[i].objective).dump() << ",lawler\n";
    }
    write_sidecar(dir / "compare_series.csv", m);
  }
  Json report;
  report["enumerate"] = enum_json;
  report["lawler"] = lawler_json;
  report["manifest"] = m;
  write_json_file(dir / "compare.json", report);
  out << "enumerate: " << enum_models << " models (" << best_by_terms.size()
      << " term sets), complete=" << (enum_complete ? "yes" : "no") << '\n';
  out << "lawler: " << lawler.answers.size()
      << " models, complete=" << (lawler.complete ? "yes" : "no") << '\n';
  if (!enum_complete || !lawler.complete) {
    throw PartialRun{"at least one method stopped at the time budget"};
  }
  return kExitOk;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  DataArgs data;
  SearchArgs search;
  std::string solutions;
  std::string reference;
  std::vector<double> epsilons;
  bool fairness = false;
  std::string eval_split = "train";
  std::string out_dir = ".";
};

struct Member {
  RuleList list;
  std::size_t errors = 0;
  std::int64_t score = 0;
};

std::vector<Member> read_solutions(const std::string& path, const Inputs& in,
                                   const CostModel& cost) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::vector<Member> members;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kMalformedInput,
                  path + " line " + std::to_string(line_no) + ": " + e.what());
    }
    Member m;
    m.list = rule_list_from_json(j, in.train_vocab);
    m.errors = misclassification_count(m.list, in.train_vocab, in.train.labels());
    m.score = cost.cost(m.errors, m.list.length());
    members.push_back(std::move(m));
  }
  return members;
}

Json range_json(const std::optional<UnfairnessRange>& r) {
  if (!r) return Json();
  return Json::array({r->lo, r->hi});
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  check_lambda(a.search.lambda);
  if (a.fairness && a.data.sensitive_col.empty()) {
    throw UsageError("--fairness needs --sensitive-col");
  }
  const auto eps = checked_epsilons(a.epsilons);
  const Inputs in = load_inputs(a.data, true);
  const bool on_test = a.eval_split == "test";
  if (on_test && !in.has_test) {
    throw UsageError("--eval-split test needs --train-fraction below 1 leaving a nonempty test set");
  }
  const BinaryDataset& eval = on_test ? in.test : in.train;
  const Vocabulary& eval_vocab = on_test ? in.test_vocab : in.train_vocab;
  const auto& eval_sensitive = on_test ? in.test_sensitive : in.train_sensitive;

  const CostModel cost(mode_of(a.search), in.train.n_examples(),
                       Lambda::from_double(a.search.lambda));
  std::vector<Member> members = read_solutions(a.solutions, in, cost);
  if (members.empty()) throw Error(ErrorCode::kEmptySet, a.solutions + " holds no solutions");

  Member reference;
  if (!a.reference.empty()) {
    reference.list = read_rule_list_file(a.reference, in.train_vocab);
    reference.errors = misclassification_count(reference.list, in.train_vocab, in.train.labels());
    reference.score = cost.cost(reference.errors, reference.list.length());
  } else {
    reference = *std::min_element(members.begin(), members.end(),
                                  [](const Member& x, const Member& y) {
                                    if (x.score != y.score) return x.score < y.score;
                                    return tie_break_less(x.list, y.list);
                                  });
  }

  // Buckets: each epsilon admits members scoring at most its threshold.
  std::vector<std::int64_t> thresholds;
  for (double e : eps) thresholds.push_back(threshold_from_reference(cost, reference.score, e));
  auto bucket_of = [&](const Member& m) -> std::optional<std::size_t> {
    if (thresholds.empty()) return 0;
    const auto it = std::lower_bound(thresholds.begin(), thresholds.end(), m.score);
    if (it == thresholds.end()) return std::nullopt;
    return static_cast<std::size_t>(it - thresholds.begin());
  };
  const std::size_t n_buckets = std::max<std::size_t>(1, eps.size());

  std::optional<FairnessScorer> scorer;
  bool dp_ok = a.fairness;
  bool eo_ok = a.fairness;
  if (a.fairness) scorer.emplace(eval_sensitive->values, eval.labels());

  const BitVector ref_pred = prediction_vector(reference.list, eval_vocab);
  struct Row {
    std::size_t index;
    std::optional<std::size_t> bucket;
    double distance;
    std::optional<double> dp, eo;
  };
  std::vector<Row> rows;
  std::vector<std::vector<std::size_t>> by_bucket(n_buckets);
  std::vector<BitVector> preds;
  preds.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    preds.push_back(prediction_vector(members[i].list, eval_vocab));
    Row row{i, bucket_of(members[i]), hamming_distance(preds.back(), ref_pred), {}, {}};
    if (dp_ok) {
      try {
        row.dp = scorer->demographic_parity(preds.back());
      } catch (const Error& e) {
        err << "warning: demographic parity skipped: " << e.what() << '\n';
        dp_ok = false;
      }
    }
    if (eo_ok) {
      try {
        row.eo = scorer->equal_opportunity(preds.back());
      } catch (const Error& e) {
        err << "warning: equal opportunity skipped: " << e.what() << '\n';
        eo_ok = false;
      }
    }
    if (row.bucket) by_bucket[*row.bucket].push_back(i);
    rows.push_back(row);
  }

  MultiplicityAccumulator multiplicity(ref_pred);
  UnfairnessAccumulator dp_acc(FairnessCriterion::kDemographicParity, false);
  UnfairnessAccumulator eo_acc(FairnessCriterion::kEqualOpportunity, false);
  Json reports = Json::array();
  std::ostringstream csv;
  csv << "epsilon,metric,value\n";
  for (std::size_t b = 0; b < n_buckets; ++b) {
    for (std::size_t i : by_bucket[b]) {
      multiplicity.add(preds[i]);
      if (dp_ok) dp_acc.add(*rows[i].dp);
      if (eo_ok) eo_acc.add(*rows[i].eo);
    }
    Json r;
    r["epsilon"] = eps.empty() ? Json() : Json(eps[b]);
    r["n_models"] = multiplicity.size();
    std::optional<UnfairnessRange> dp, eo;
    if (multiplicity.size() == 0) {
      err << "warning: no solutions within epsilon " << (eps.empty() ? 0.0 : eps[b]) << '\n';
      r["ambiguity"] = Json();
      r["discrepancy"] = Json();
    } else {
      r["ambiguity"] = multiplicity.ambiguity();
      r["discrepancy"] = multiplicity.discrepancy();
      if (dp_ok) dp = dp_acc.range();
      if (eo_ok) eo = eo_acc.range();
    }
    r["dp_range"] = range_json(dp);
    r["eo_range"] = range_json(eo);
    reports.push_back(r);

    const std::string eps_cell = eps.empty() ? "" : Json(eps[b]).dump();
    csv << eps_cell << ",n_models," << multiplicity.size() << '\n';
    for (const char* key : {"ambiguity", "discrepancy"}) {
      if (!r[key].is_null()) csv << eps_cell << ',' << key << ',' << r[key].dump() << '\n';
    }
    if (dp) {
      csv << eps_cell << ",dp_lo," << Json(dp->lo).dump() << '\n';
      csv << eps_cell << ",dp_hi," << Json(dp->hi).dump() << '\n';
    }
    if (eo) {
      csv << eps_cell << ",eo_lo," << Json(eo->lo).dump() << '\n';
      csv << eps_cell << ",eo_hi," << Json(eo->hi).dump() << '\n';
    }
  }

  Json params = search_manifest(a.search);
  params["epsilons"] = eps;
  params["fairness"] = a.fairness;
  params["eval_split"] = a.eval_split;
  Json inputs = data_manifest(a.data, in);
  inputs["solutions"] = a.solutions;
  inputs["reference"] = a.reference.empty() ? Json() : Json(a.reference);
  const Json m = manifest("analyze", inputs, params, eval.fingerprint());

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  Json metrics;
  metrics["reference"] = rule_list_to_json(reference.list, in.train_vocab, reference.errors,
                                           in.train.n_examples(), a.search.lambda);
  metrics["reports"] = reports;
  metrics["manifest"] = m;
  write_json_file(dir / "metrics.json", metrics);
  {
    auto f = open_out(dir / "metrics.csv");
    f << csv.str();
    write_sidecar(dir / "metrics.csv", m);
  }
  {
    auto f = open_out(dir / "per_model.csv");
    f << "index,min_epsilon,risk,length,distance,dp,eo\n";
    for (const auto& row : rows) {
      const auto& mem = members[row.index];
      f << row.index << ',';
      if (row.bucket && !eps.empty()) f << Json(eps[*row.bucket]).dump();
      f << ',' << Json(static_cast<double>(mem.errors) / in.train.n_examples()).dump() << ','
        << mem.list.length() << ',' << Json(row.distance).dump() << ',';
      if (row.dp) f << Json(*row.dp).dump();
      f << ',';
      if (row.eo) f << Json(*row.eo).dump();
      f << '\n';
    }
    write_sidecar(dir / "per_model.csv", m);
  }
  out << reports.dump(2) << '\n';
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidFraction:
    case ErrorCode::kInvalidArgument:
      return kExitUsage;
    default:
      return kExitData;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rule list Rashomon set enumeration and analysis", "rashomon"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  MineArgs mine;
  auto* mine_cmd = app.add_subcommand("mine", "Mine coverage-filtered conjunction terms");
  add_data_options(*mine_cmd, mine.data, false);
  mine_cmd->add_option("--max-conj-len,--mine-max-len", mine.data.mine_max_len,
                       "Longest conjunction")
      ->capture_default_str();
  mine_cmd->add_option("--min-pos-coverage", mine.data.min_pos_coverage,
                       "Minimum fraction of positives covered")
      ->capture_default_str();
  mine_cmd->add_option("--out", mine.out, "Terms file (stdout when omitted)");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the optimal rule list");
  add_data_options(*fit_cmd, fit.data, true);
  add_search_options(*fit_cmd, fit.search);
  fit_cmd->add_option("--out", fit.out, "Output JSON (stdout when omitted)");

  EnumArgs en;
  auto* enum_cmd = app.add_subcommand("enumerate", "Enumerate the Rashomon set");
  add_data_options(*enum_cmd, en.data, true);
  add_search_options(*enum_cmd, en.search);
  add_enum_options(*enum_cmd, en.search);
  enum_cmd->add_option("--epsilon", en.epsilons, "Tolerance (repeatable)");
  enum_cmd->add_option("--threshold-errors", en.threshold_errors,
                       "Explicit misclassification bound instead of --epsilon");
  enum_cmd->add_option("--reference", en.reference, "Reference rule list JSON");
  enum_cmd->add_flag("--sorted", en.sorted, "Emit solutions sorted by score");
  enum_cmd->add_option("--out", en.out, "Solutions JSONL (stdout when omitted)");
  enum_cmd->add_option("--stats", en.stats, "Stats JSON (default <out>.stats.json)");

  TopKArgs tk;
  auto* topk_cmd = app.add_subcommand("topk", "Top-K rule lists with distinct term sets");
  add_data_options(*topk_cmd, tk.data, true);
  add_search_options(*topk_cmd, tk.search);
  topk_cmd->add_option("--k", tk.k, "Number of answers")->capture_default_str();
  topk_cmd->add_option("--branching", tk.branching,
                       "Subproblem split: remove (one term dropped per child) or partition")
      ->capture_default_str()
      ->check(CLI::IsMember({"remove", "partition"}));
  topk_cmd->add_option("--out", tk.out, "Output JSON (stdout when omitted)");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Enumerator against top-K under one budget");
  add_data_options(*cmp_cmd, cmp.data, true);
  add_search_options(*cmp_cmd, cmp.search);
  add_enum_options(*cmp_cmd, cmp.search);
  cmp_cmd->add_option("--epsilon", cmp.epsilon, "Tolerance for the enumerator")
      ->capture_default_str();
  cmp_cmd->add_option("--k", cmp.k, "Top-K answers (0 = until exhausted or out of time)")
      ->capture_default_str();
  cmp_cmd->add_option("--budget-s", cmp.budget_s, "Wall-clock budget per method")
      ->capture_default_str();
  cmp_cmd->add_option("--branching", cmp.branching, "Top-K subproblem split")
      ->capture_default_str()
      ->check(CLI::IsMember({"remove", "partition"}));
  cmp_cmd->add_option("--out-dir", cmp.out_dir, "Directory for compare.json and series CSV")
      ->capture_default_str();

  AnalyzeArgs an;
  auto* an_cmd = app.add_subcommand("analyze", "Multiplicity and fairness of a solution set");
  add_data_options(*an_cmd, an.data, true);
  add_search_options(*an_cmd, an.search);
  an_cmd->add_option("--objective", an.search.objective, "Score used for epsilon buckets")
      ->capture_default_str()
      ->check(CLI::IsMember({"risk", "regularized"}));
  an_cmd->add_option("--solutions", an.solutions, "Solutions JSONL")->required();
  an_cmd->add_option("--reference", an.reference, "Reference rule list JSON");
  an_cmd->add_option("--epsilon", an.epsilons, "Tolerance bucket (repeatable)");
  an_cmd->add_flag("--fairness", an.fairness, "Report demographic parity and equal opportunity");
  an_cmd->add_option("--eval-split", an.eval_split, "Rows the metrics are computed on")
      ->capture_default_str()
      ->check(CLI::IsMember({"train", "test"}));
  an_cmd->add_option("--out-dir", an.out_dir, "Directory for metrics files")
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("rashomon");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*mine_cmd) return cmd_mine(mine, out);
    if (*fit_cmd) return cmd_fit(fit, out);
    if (*enum_cmd) return cmd_enumerate(en, out);
    if (*topk_cmd) return cmd_topk(tk, out);
    if (*cmp_cmd) return cmd_compare(cmp, out);
    if (*an_cmd) return cmd_analyze(an, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PartialRun& p) {
    err << "partial result: " << p.message << '\n';
    return kExitTimeout;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace rashomon::cli
