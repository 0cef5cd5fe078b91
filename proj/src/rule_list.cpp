#include "rashomon/rule_list.hpp"

#include <algorithm>
#include <cmath>

#include "rashomon/error.hpp"

namespace rashomon {

std::vector<TermId> term_set(const RuleList& list) {
  std::vector<TermId> ids;
  ids.reserve(list.rules.size());
  for (const auto& r : list.rules) ids.push_back(r.term_id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool tie_break_less(const RuleList& a, const RuleList& b) noexcept {
  if (a.rules.size() != b.rules.size()) return a.rules.size() < b.rules.size();
  if (a.rules != b.rules) {
    return std::lexicographical_compare(a.rules.begin(), a.rules.end(),
                                        b.rules.begin(), b.rules.end());
  }
  return a.default_label < b.default_label;
}

bool Prefix::contains(TermId id) const noexcept {
  return std::any_of(rules.begin(), rules.end(),
                     [id](const Rule& r) { return r.term_id == id; });
}

Lambda Lambda::from_double(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be a finite value >= 0");
  }
  std::int64_t den = 1;
  for (int digits = 0; digits <= 9; ++digits, den *= 10) {
    const double scaled = value * static_cast<double>(den);
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) <= 1e-9 * std::max(1.0, scaled)) {
      return Lambda{static_cast<std::int64_t>(rounded), den};
    }
  }
  den = 1'000'000'000;
  return Lambda{static_cast<std::int64_t>(std::round(value * static_cast<double>(den))), den};
}

CostModel::CostModel(ObjectiveMode mode, std::size_t n_examples, Lambda lambda)
    : mode_(mode), n_(n_examples), lambda_(lambda) {
  if (mode_ == ObjectiveMode::kRegularized) {
    // Scores must fit in int64 for lists up to 64 rules.
    const long double bound =
        static_cast<long double>(n_) *
        (static_cast<long double>(lambda_.den) +
         64.0L * static_cast<long double>(lambda_.num));
    if (bound > 4.0e18L) {
      throw Error(ErrorCode::kInvalidArgument,
                  "lambda/dataset size combination overflows integer scores");
    }
  }
}

std::int64_t CostModel::scale_floor(double real) const noexcept {
  long double x = static_cast<long double>(real) * static_cast<long double>(n_);
  if (mode_ == ObjectiveMode::kRegularized) x *= static_cast<long double>(lambda_.den);
  x += 1e-9L * std::max(1.0L, std::abs(x));
  return static_cast<std::int64_t>(std::floor(x));
}

double CostModel::to_real(std::int64_t cost) const noexcept {
  if (n_ == 0) return 0.0;
  long double denom = static_cast<long double>(n_);
  if (mode_ == ObjectiveMode::kRegularized) denom *= static_cast<long double>(lambda_.den);
  return static_cast<double>(static_cast<long double>(cost) / denom);
}

Label predict(const RuleList& list, std::span<const std::uint8_t> x,
              const Vocabulary& vocabulary) {
  for (const auto& rule : list.rules) {
    const auto& term = vocabulary.at(rule.term_id);
    if (!term.feature_indices) {
      throw Error(ErrorCode::kInvalidArgument,
                  "term '" + term.name + "' has no feature definition");
    }
    bool fires = true;
    for (std::size_t j : *term.feature_indices) {
      if (j >= x.size()) {
        throw Error(ErrorCode::kIndexOutOfRange, "input shorter than feature index");
      }
      if (!x[j]) {
        fires = false;
        break;
      }
    }
    if (fires) return rule.label;
  }
  return list.default_label;
}

BitVector prediction_vector(const RuleList& list, const Vocabulary& vocabulary) {
  const std::size_t n = vocabulary.n_examples();
  BitVector out(n);
  BitVector remaining = BitVector::ones(n);
  for (const auto& rule : list.rules) {
    const auto& capture = vocabulary.at(rule.term_id).capture;
    if (rule.label) out |= capture & remaining;
    remaining.and_not(capture);
  }
  if (list.default_label) out |= remaining;
  return out;
}

std::size_t misclassification_count(const RuleList& list,
                                    const Vocabulary& vocabulary,
                                    const BitVector& labels) {
  if (labels.size() != vocabulary.n_examples()) {
    throw Error(ErrorCode::kLengthMismatch, "labels and vocabulary disagree on N");
  }
  return count_xor(prediction_vector(list, vocabulary), labels);
}

double empirical_risk(const RuleList& list, const BinaryDataset& dataset,
                      const Vocabulary& vocabulary) {
  if (dataset.n_examples() == 0) return 0.0;
  return static_cast<double>(
             misclassification_count(list, vocabulary, dataset.labels())) /
         static_cast<double>(dataset.n_examples());
}

double objective(const RuleList& list, const BinaryDataset& dataset,
                 const Vocabulary& vocabulary, double lambda) {
  if (lambda < 0.0) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  return empirical_risk(list, dataset, vocabulary) +
         lambda * static_cast<double>(list.length());
}

double lower_bound(const Prefix& prefix, const BinaryDataset& dataset,
                   double lambda) {
  if (lambda < 0.0) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  const double n = static_cast<double>(dataset.n_examples());
  const double risk = n > 0 ? static_cast<double>(prefix.errors_captured) / n : 0.0;
  return risk + lambda * static_cast<double>(prefix.size() + 1);
}

Prefix extend(const Prefix& prefix, Rule rule, const Vocabulary& vocabulary,
              const BinaryDataset& dataset) {
  if (prefix.contains(rule.term_id)) {
    throw Error(ErrorCode::kDuplicateTerm,
                "term " + std::to_string(rule.term_id) + " already in prefix");
  }
  const auto& capture = vocabulary.at(rule.term_id).capture;
  const auto delta = capture_delta(prefix.captured, capture, dataset.labels());
  Prefix next = prefix;
  next.rules.push_back(rule);
  next.captured |= capture;
  next.errors_captured += delta.errors_for(rule.label);
  next.captured_positives += delta.newly_pos;
  next.last_newly_captured = delta.newly;
  return next;
}

RuleList canonicalize(RuleList list) {
  auto& rules = list.rules;
  std::size_t start = 0;
  while (start < rules.size()) {
    std::size_t end = start + 1;
    while (end < rules.size() && rules[end].label == rules[start].label) ++end;
    std::sort(rules.begin() + static_cast<std::ptrdiff_t>(start),
              rules.begin() + static_cast<std::ptrdiff_t>(end));
    start = end;
  }
  return list;
}

}  // namespace rashomon
