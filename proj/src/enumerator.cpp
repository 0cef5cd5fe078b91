#include "rashomon/enumerator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "rashomon/error.hpp"

namespace rashomon {
namespace {

using Clock = std::chrono::steady_clock;

void copy_or(BitVector& dst, const BitVector& a, const BitVector& b) noexcept {
  auto d = dst.words();
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = wa[i] | wb[i];
}

// Depth-first search state. Everything here is allocated once, sized by the
// maximum prefix length, so live memory does not depend on how many lists
// are emitted.
class Walker {
 public:
  Walker(const BinaryDataset& data, const Vocabulary& vocab, const EnumConfig& cfg,
         const SolutionSink& sink, std::optional<Clock::time_point> deadline)
      : data_(data),
        vocab_(vocab),
        cfg_(cfg),
        sink_(sink),
        deadline_(deadline),
        n_(data.n_examples()),
        positives_(positive_count(data)),
        max_prefix_(cfg.max_total_len - 1),
        captured_(max_prefix_ + 1, BitVector(data.n_examples())),
        errors_(max_prefix_ + 1, 0),
        cap_pos_(max_prefix_ + 1, 0),
        cap_count_(max_prefix_ + 1, 0),
        in_prefix_(vocab.size(), 0) {
    rules_.reserve(max_prefix_);
    scratch_.list.rules.reserve(max_prefix_);
  }

  // Root prefix: tests the two constant lists and, when `descend`, every
  // subtree below it.
  void run_root(bool descend) {
    visit(0, true, descend);
  }

  // Subtree rooted at the one-rule prefix (t -> y); the caller has already
  // accepted the rule under every active pruning.
  void run_child(Rule rule, bool member) {
    push_rule(0, rule);
    visit(1, member, true);
    pop_rule(rule);
  }

  // One-rule prefixes below the root, in traversal order, with their
  // membership flags; used to split work across threads.
  std::vector<std::pair<Rule, bool>> root_children() {
    std::vector<std::pair<Rule, bool>> out;
    if (max_prefix_ == 0) return out;
    for (TermId t = 0; t < vocab_.size(); ++t) {
      const auto delta = capture_delta(captured_[0], vocab_[t].capture, data_.labels());
      for (Label y : {Label{0}, Label{1}}) {
        bool member = true;
        if (accept(0, Rule{t, y}, delta, member)) out.emplace_back(Rule{t, y}, member);
      }
    }
    return out;
  }

  EnumStats& stats() noexcept { return stats_; }

 private:
  bool timed_out() {
    if (aborted_) return true;
    if (deadline_ && (++clock_ticks_ & 0x3ffU) == 0 && Clock::now() >= *deadline_) {
      aborted_ = true;
      stats_.complete = false;
    }
    return aborted_;
  }

  std::size_t live_bytes() const noexcept {
    std::size_t bytes = 0;
    for (const auto& c : captured_) bytes += c.capacity_bytes();
    bytes += (errors_.capacity() + cap_pos_.capacity() + cap_count_.capacity()) *
             sizeof(std::size_t);
    bytes += in_prefix_.capacity();
    bytes += (rules_.capacity() + scratch_.list.rules.capacity()) * sizeof(Rule);
    return bytes;
  }

  // Applies the membership conditions to a candidate child of depth k.
  // Returns false when an active pruning rejects it; clears `member` when a
  // disabled pruning would have.
  bool accept(std::size_t k, Rule rule, const CaptureDelta& delta, bool& member) const {
    if (!is_canonical(std::span<const Rule>(rules_.data(), k), rule)) {
      if (cfg_.prunings.symmetry) return false;
      member = false;
    }
    if (delta.newly < cfg_.min_capture) {
      if (cfg_.prunings.min_support) return false;
      member = false;
    }
    if (cfg_.prunings.lower_bound) {
      const std::size_t child_errors = errors_[k] + delta.errors_for(rule.label);
      if (cfg_.cost.cost(child_errors, k + 2) > cfg_.threshold) return false;
    }
    return true;
  }

  void push_rule(std::size_t k, Rule rule) {
    const auto& capture = vocab_[rule.term_id].capture;
    const auto delta = capture_delta(captured_[k], capture, data_.labels());
    copy_or(captured_[k + 1], captured_[k], capture);
    errors_[k + 1] = errors_[k] + delta.errors_for(rule.label);
    cap_pos_[k + 1] = cap_pos_[k] + delta.newly_pos;
    cap_count_[k + 1] = cap_count_[k] + delta.newly;
    rules_.push_back(rule);
    in_prefix_[rule.term_id] = 1;
  }

  void pop_rule(Rule rule) {
    rules_.pop_back();
    in_prefix_[rule.term_id] = 0;
  }

  void emit(std::size_t k, Label label, std::size_t errors, std::int64_t score) {
    scratch_.list.rules.assign(rules_.begin(), rules_.end());
    scratch_.list.default_label = label;
    scratch_.errors = errors;
    scratch_.score = score;
    scratch_.risk = n_ ? static_cast<double>(errors) / static_cast<double>(n_) : 0.0;
    scratch_.objective =
        scratch_.risk + cfg_.cost.lambda().value() * static_cast<double>(k + 1);
    ++stats_.solutions;
    try {
      sink_(scratch_);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kSinkFailure, e.what());
    }
  }

  void visit(std::size_t k, bool member, bool descend) {
    ++stats_.prefixes_visited;
    if (k > stats_.peak_queue_depth) stats_.peak_queue_depth = k;
    stats_.peak_live_bytes = std::max(stats_.peak_live_bytes, live_bytes());

    // Step 1: close the prefix with each default label.
    const std::size_t uncaptured_pos = positives_ - cap_pos_[k];
    const std::size_t uncaptured = n_ - cap_count_[k];
    for (Label y : {Label{0}, Label{1}}) {
      if (timed_out()) return;
      ++stats_.candidates_visited;
      const std::size_t errors =
          errors_[k] + (y ? uncaptured - uncaptured_pos : uncaptured_pos);
      const std::int64_t score = cfg_.cost.cost(errors, k + 1);
      if (member && score <= cfg_.threshold) emit(k, y, errors, score);
    }
    if (!descend || k >= max_prefix_) return;

    // Step 2: grow by one rule over the terms not yet used.
    for (TermId t = 0; t < vocab_.size(); ++t) {
      if (in_prefix_[t]) continue;
      const auto delta = capture_delta(captured_[k], vocab_[t].capture, data_.labels());
      for (Label y : {Label{0}, Label{1}}) {
        const Rule rule{t, y};
        bool child_member = member;
        if (!accept(k, rule, delta, child_member)) continue;
        push_rule(k, rule);
        visit(k + 1, child_member, true);
        pop_rule(rule);
        if (aborted_) return;
      }
    }
  }

  const BinaryDataset& data_;
  const Vocabulary& vocab_;
  const EnumConfig& cfg_;
  const SolutionSink& sink_;
  std::optional<Clock::time_point> deadline_;
  std::size_t n_;
  std::size_t positives_;
  std::size_t max_prefix_;
  std::vector<BitVector> captured_;
  std::vector<std::size_t> errors_;
  std::vector<std::size_t> cap_pos_;
  std::vector<std::size_t> cap_count_;
  std::vector<std::uint8_t> in_prefix_;
  std::vector<Rule> rules_;
  Solution scratch_;
  EnumStats stats_;
  std::uint32_t clock_ticks_ = 0;
  bool aborted_ = false;
};

void merge_stats(EnumStats& into, const EnumStats& from) {
  into.candidates_visited += from.candidates_visited;
  into.prefixes_visited += from.prefixes_visited;
  into.solutions += from.solutions;
  into.peak_queue_depth = std::max(into.peak_queue_depth, from.peak_queue_depth);
  into.peak_live_bytes = std::max(into.peak_live_bytes, from.peak_live_bytes);
  into.complete = into.complete && from.complete;
}

EnumStats run_parallel(const BinaryDataset& data, const Vocabulary& vocab,
                       const EnumConfig& cfg, const SolutionSink& sink,
                       std::optional<Clock::time_point> deadline) {
  Walker root(data, vocab, cfg, sink, deadline);
  root.run_root(/*descend=*/false);
  EnumStats total = root.stats();
  if (!total.complete) return total;

  const auto children = root.root_children();
  std::vector<std::vector<Solution>> buffers(children.size());
  std::vector<EnumStats> stats(children.size());
  std::vector<std::exception_ptr> failures(children.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < children.size(); i = next++) {
      try {
        SolutionSink collect = [&buffers, i](const Solution& s) { buffers[i].push_back(s); };
        Walker walker(data, vocab, cfg, collect, deadline);
        walker.run_child(children[i].first, children[i].second);
        stats[i] = walker.stats();
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t n_threads = std::min(cfg.threads, std::max<std::size_t>(children.size(), 1));
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(work);
  }
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (failures[i]) std::rethrow_exception(failures[i]);
    // The root walker counted its own solutions; children are counted here.
    merge_stats(total, stats[i]);
    for (const auto& s : buffers[i]) {
      try {
        sink(s);
      } catch (const Error&) {
        throw;
      } catch (const std::exception& e) {
        throw Error(ErrorCode::kSinkFailure, e.what());
      }
    }
  }
  return total;
}

}  // namespace

std::int64_t compute_threshold(double reference_risk, double epsilon, std::size_t n) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::kInvalidFraction, "epsilon must lie in [0, 1]");
  }
  const long double x = (static_cast<long double>(reference_risk) + epsilon) *
                        static_cast<long double>(n);
  return static_cast<std::int64_t>(std::floor(x + 1e-9L * std::max(1.0L, x)));
}

std::int64_t threshold_from_reference(const CostModel& cost,
                                      std::int64_t reference_score, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::kInvalidFraction, "epsilon must lie in [0, 1]");
  }
  return reference_score + cost.scale_floor(epsilon);
}

EnumStats enumerate_rashomon(const BinaryDataset& dataset, const Vocabulary& vocabulary,
                             const EnumConfig& config, const SolutionSink& sink) {
  if (vocabulary.empty()) {
    throw Error(ErrorCode::kEmptyVocabulary, "cannot enumerate with an empty vocabulary");
  }
  if (vocabulary.n_examples() != dataset.n_examples()) {
    throw Error(ErrorCode::kLengthMismatch, "vocabulary captures do not match dataset");
  }
  if (config.max_total_len < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_total_len must be >= 1");
  }
  if (config.cost.n_examples() != dataset.n_examples()) {
    throw Error(ErrorCode::kInvalidArgument, "cost model built for a different N");
  }

  const auto start = Clock::now();
  std::optional<Clock::time_point> deadline;
  if (config.timeout) {
    deadline = start + std::chrono::duration_cast<Clock::duration>(*config.timeout);
    if (Clock::now() >= *deadline) {
      EnumStats stats;
      stats.complete = false;
      return stats;
    }
  }

  std::vector<Solution> buffered;
  const SolutionSink collect = [&buffered](const Solution& s) { buffered.push_back(s); };
  const SolutionSink& target = config.emit_order == EmitOrder::kSorted ? collect : sink;

  EnumStats stats;
  if (config.threads > 1) {
    stats = run_parallel(dataset, vocabulary, config, target, deadline);
  } else {
    Walker walker(dataset, vocabulary, config, target, deadline);
    walker.run_root(/*descend=*/true);
    stats = walker.stats();
  }

  if (config.emit_order == EmitOrder::kSorted) {
    std::stable_sort(buffered.begin(), buffered.end(),
                     [](const Solution& a, const Solution& b) {
                       if (a.score != b.score) return a.score < b.score;
                       return tie_break_less(a.list, b.list);
                     });
    for (const auto& s : buffered) sink(s);
  }
  stats.elapsed = Clock::now() - start;
  return stats;
}

EnumStats sweep_tolerances(const BinaryDataset& dataset, const Vocabulary& vocabulary,
                           const RuleList& reference, const std::vector<double>& epsilons,
                           const SweepOptions& options, const BucketedSink& sink,
                           std::vector<std::int64_t>* thresholds_out) {
  if (epsilons.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "at least one epsilon is required");
  }
  if (!std::is_sorted(epsilons.begin(), epsilons.end())) {
    throw Error(ErrorCode::kInvalidArgument, "epsilons must be ascending");
  }
  EnumConfig cfg;
  cfg.max_total_len = options.max_total_len;
  cfg.cost = CostModel(options.mode, dataset.n_examples(), Lambda::from_double(options.lambda));
  cfg.min_capture = options.min_capture;
  cfg.prunings = options.prunings;
  cfg.threads = options.threads;
  cfg.emit_order = options.emit_order;
  cfg.timeout = options.timeout;

  const std::size_t ref_errors =
      misclassification_count(reference, vocabulary, dataset.labels());
  const std::int64_t ref_score = cfg.cost.cost(ref_errors, reference.length());
  std::vector<std::int64_t> thresholds;
  for (double eps : epsilons) {
    thresholds.push_back(threshold_from_reference(cfg.cost, ref_score, eps));
  }
  cfg.threshold = thresholds.back();
  if (thresholds_out) *thresholds_out = thresholds;

  return enumerate_rashomon(dataset, vocabulary, cfg, [&](const Solution& s) {
    const auto it = std::lower_bound(thresholds.begin(), thresholds.end(), s.score);
    sink(s, static_cast<std::size_t>(it - thresholds.begin()));
  });
}

SweepResult sweep_tolerances(const BinaryDataset& dataset, const Vocabulary& vocabulary,
                             const RuleList& reference,
                             const std::vector<double>& epsilons,
                             const SweepOptions& options) {
  SweepResult out;
  out.epsilons = epsilons;
  out.stats = sweep_tolerances(
      dataset, vocabulary, reference, epsilons, options,
      [&](const Solution& s, std::size_t bucket) {
        out.solutions.push_back(s);
        out.bucket.push_back(bucket);
      },
      &out.thresholds);
  out.counts.assign(epsilons.size(), 0);
  for (std::size_t b : out.bucket) ++out.counts[b];
  for (std::size_t i = 1; i < out.counts.size(); ++i) out.counts[i] += out.counts[i - 1];
  const CostModel cost(options.mode, dataset.n_examples(), Lambda::from_double(options.lambda));
  out.reference_score = cost.cost(
      misclassification_count(reference, vocabulary, dataset.labels()), reference.length());
  return out;
}

}  // namespace rashomon
