#include "rashomon/vocabulary.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "rashomon/error.hpp"

namespace rashomon {

Vocabulary::Vocabulary(std::vector<Term> terms, std::size_t n_examples)
    : terms_(std::move(terms)), n_examples_(n_examples) {
  std::unordered_set<std::string> names;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    terms_[i].id = static_cast<TermId>(i);
    if (terms_[i].capture.size() != n_examples_) {
      throw Error(ErrorCode::kLengthMismatch,
                  "term '" + terms_[i].name + "' has " +
                      std::to_string(terms_[i].capture.size()) +
                      " bits, expected " + std::to_string(n_examples_));
    }
    if (!names.insert(terms_[i].name).second) {
      throw Error(ErrorCode::kDuplicateName,
                  "term name '" + terms_[i].name + "' repeated");
    }
  }
}

std::optional<TermId> Vocabulary::find(const std::string& name) const {
  for (const auto& t : terms_) {
    if (t.name == name) return t.id;
  }
  return std::nullopt;
}

BitVector term_capture(const std::vector<std::size_t>& feature_indices,
                       const BinaryDataset& dataset) {
  BitVector capture = BitVector::ones(dataset.n_examples());
  for (std::size_t j : feature_indices) {
    if (j >= dataset.n_features()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "feature index " + std::to_string(j) + " >= " +
                      std::to_string(dataset.n_features()));
    }
    capture &= dataset.feature(j);
  }
  return capture;
}

namespace {

void check_coverage_fraction(double min_pos_coverage) {
  if (!(min_pos_coverage >= 0.0 && min_pos_coverage <= 1.0)) {
    throw Error(ErrorCode::kInvalidFraction,
                "positive coverage must lie in [0, 1], got " +
                    std::to_string(min_pos_coverage));
  }
}

bool covers(std::size_t covered_positives, std::size_t positives,
            double min_pos_coverage) {
  return static_cast<double>(covered_positives) + 1e-9 >=
         min_pos_coverage * static_cast<double>(positives);
}

struct Miner {
  const BinaryDataset& data;
  std::size_t max_len;
  double min_cov;
  std::size_t positives;
  std::vector<Term> out;
  std::vector<std::size_t> indices;

  void extend(const BitVector& capture, std::size_t first) {
    for (std::size_t j = first; j < data.n_features(); ++j) {
      BitVector next = capture & data.feature(j);
      // Coverage is anti-monotone in the conjunction, so a failing term
      // prunes every superset.
      if (!covers(count_and(next, data.labels()), positives, min_cov)) continue;
      indices.push_back(j);
      std::string name;
      for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i) name += " & ";
        name += data.feature_names()[indices[i]];
      }
      out.push_back(Term{0, std::move(name), indices, next});
      if (indices.size() < max_len) extend(next, j + 1);
      indices.pop_back();
    }
  }
};

}  // namespace

Vocabulary mine_terms(const BinaryDataset& dataset,
                      std::size_t max_conjunction_len, double min_pos_coverage) {
  if (max_conjunction_len < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max conjunction length must be >= 1");
  }
  check_coverage_fraction(min_pos_coverage);
  const std::size_t positives = positive_count(dataset);
  if (positives == 0 && min_pos_coverage > 0.0) {
    throw Error(ErrorCode::kNoPositives,
                "dataset has no positive examples to measure coverage against");
  }
  Miner miner{dataset, max_conjunction_len, min_pos_coverage, positives, {}, {}};
  miner.extend(BitVector::ones(dataset.n_examples()), 0);
  return Vocabulary(std::move(miner.out), dataset.n_examples());
}

Vocabulary filter_by_positive_coverage(const Vocabulary& vocabulary,
                                       const BitVector& labels,
                                       double min_pos_coverage) {
  check_coverage_fraction(min_pos_coverage);
  if (labels.size() != vocabulary.n_examples()) {
    throw Error(ErrorCode::kLengthMismatch, "label length differs from vocabulary");
  }
  const std::size_t positives = labels.count();
  if (positives == 0 && min_pos_coverage > 0.0) {
    throw Error(ErrorCode::kNoPositives,
                "dataset has no positive examples to measure coverage against");
  }
  std::vector<Term> kept;
  for (const auto& t : vocabulary.terms()) {
    if (covers(count_and(t.capture, labels), positives, min_pos_coverage)) {
      kept.push_back(t);
    }
  }
  return Vocabulary(std::move(kept), vocabulary.n_examples());
}

Vocabulary parse_terms(const std::string& text, std::size_t n_examples,
                       const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::vector<Term> terms;
  std::unordered_map<std::string, std::size_t> first_line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto open = line.find('{');
    const auto close = line.find('}');
    if (open != 0 || close == std::string::npos) {
      throw Error(ErrorCode::kMalformedInput, where + ": expected '{NAME}' prefix");
    }
    Term term;
    term.name = line.substr(1, close - 1);
    if (term.name.empty()) {
      throw Error(ErrorCode::kMalformedInput, where + ": empty term name");
    }
    if (auto [it, fresh] = first_line.emplace(term.name, line_no); !fresh) {
      throw Error(ErrorCode::kDuplicateName,
                  where + ": term '" + term.name + "' already defined on line " +
                      std::to_string(it->second));
    }
    std::istringstream bits(line.substr(close + 1));
    std::vector<bool> values;
    std::string tok;
    while (bits >> tok) {
      if (tok != "0" && tok != "1") {
        throw Error(ErrorCode::kNonBinaryValue,
                    where + ": token '" + tok + "' is not 0/1");
      }
      values.push_back(tok == "1");
    }
    if (values.size() != n_examples) {
      throw Error(ErrorCode::kLengthMismatch,
                  where + ": term '" + term.name + "' has " +
                      std::to_string(values.size()) + " bits, expected " +
                      std::to_string(n_examples));
    }
    term.capture = BitVector(n_examples);
    for (std::size_t n = 0; n < n_examples; ++n) term.capture.set(n, values[n]);
    terms.push_back(std::move(term));
  }
  return Vocabulary(std::move(terms), n_examples);
}

Vocabulary load_terms_file(const std::filesystem::path& path,
                           std::size_t n_examples) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_terms(buf.str(), n_examples, path.string());
}

void write_terms_file(const std::filesystem::path& path,
                      const Vocabulary& vocabulary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& t : vocabulary.terms()) {
    out << '{' << t.name << '}';
    for (std::size_t n = 0; n < t.capture.size(); ++n) {
      out << ' ' << (t.capture.test(n) ? '1' : '0');
    }
    out << '\n';
  }
}

}  // namespace rashomon
