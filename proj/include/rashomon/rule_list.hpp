#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "rashomon/bitvector.hpp"
#include "rashomon/dataset.hpp"
#include "rashomon/vocabulary.hpp"

namespace rashomon {

using Label = std::uint8_t;

struct Rule {
  TermId term_id = 0;
  Label label = 0;

  friend auto operator<=>(const Rule&, const Rule&) = default;
};

// A rule list is its non-default rules followed by the implicit default rule
// (constant-true test). length() counts the default rule.
struct RuleList {
  std::vector<Rule> rules;
  Label default_label = 0;

  std::size_t length() const noexcept { return rules.size() + 1; }

  friend bool operator==(const RuleList&, const RuleList&) = default;
};

// Sorted ids of the terms a list uses.
std::vector<TermId> term_set(const RuleList& list);

// Deterministic order among equally scored lists: shorter first, then the
// lexicographically smaller (term_id, label) sequence, then default label.
bool tie_break_less(const RuleList& a, const RuleList& b) noexcept;

// Non-default rules under construction together with their capture state.
struct Prefix {
  std::vector<Rule> rules;
  BitVector captured;               // examples falling into some rule so far
  std::size_t errors_captured = 0;  // captured examples the capturing rule gets wrong
  std::size_t captured_positives = 0;
  std::size_t last_newly_captured = 0;  // examples the last rule added

  static Prefix empty(std::size_t n_examples) {
    return Prefix{{}, BitVector(n_examples), 0, 0, 0};
  }
  std::size_t size() const noexcept { return rules.size(); }
  bool contains(TermId id) const noexcept;
};

// Regularization weight held as an exact decimal fraction num/den so that
// objective comparisons run on integers.
struct Lambda {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Lambda from_double(double value);
  double value() const noexcept {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

enum class ObjectiveMode { kRisk, kRegularized };

// Maps (misclassifications, length) to an integer score. In risk mode the
// score is the error count; in regularized mode it is
//   errors * den + num * N * length  ==  N * den * (risk + lambda * length).
class CostModel {
 public:
  CostModel() = default;
  CostModel(ObjectiveMode mode, std::size_t n_examples, Lambda lambda = {});

  static CostModel risk(std::size_t n) { return CostModel(ObjectiveMode::kRisk, n); }
  static CostModel regularized(std::size_t n, double lambda) {
    return CostModel(ObjectiveMode::kRegularized, n, Lambda::from_double(lambda));
  }

  std::int64_t cost(std::size_t errors, std::size_t length) const noexcept {
    if (mode_ == ObjectiveMode::kRisk) return static_cast<std::int64_t>(errors);
    return static_cast<std::int64_t>(errors) * lambda_.den +
           lambda_.num * static_cast<std::int64_t>(n_) *
               static_cast<std::int64_t>(length);
  }
  // Integer score corresponding to a real-valued bound, rounded down.
  std::int64_t scale_floor(double real) const noexcept;
  double to_real(std::int64_t cost) const noexcept;

  ObjectiveMode mode() const noexcept { return mode_; }
  std::size_t n_examples() const noexcept { return n_; }
  const Lambda& lambda() const noexcept { return lambda_; }

 private:
  ObjectiveMode mode_ = ObjectiveMode::kRisk;
  std::size_t n_ = 0;
  Lambda lambda_;
};

// Evaluates the list on a single input; every used term needs known
// feature indices.
Label predict(const RuleList& list, std::span<const std::uint8_t> x,
              const Vocabulary& vocabulary);

// h_d(x_n) for every example, from the term captures.
BitVector prediction_vector(const RuleList& list, const Vocabulary& vocabulary);

std::size_t misclassification_count(const RuleList& list,
                                    const Vocabulary& vocabulary,
                                    const BitVector& labels);
double empirical_risk(const RuleList& list, const BinaryDataset& dataset,
                      const Vocabulary& vocabulary);
// Empirical risk plus lambda * length (default rule included).
double objective(const RuleList& list, const BinaryDataset& dataset,
                 const Vocabulary& vocabulary, double lambda);

// Errors among captured examples only; in regularized mode adds
// lambda * (prefix length + 1).
double lower_bound(const Prefix& prefix, const BinaryDataset& dataset,
                   double lambda = 0.0);

// Errors of prefix + default rule predicting `label`, in O(1).
inline std::size_t errors_with_default(const Prefix& prefix, Label label,
                                       std::size_t n_examples,
                                       std::size_t positives) noexcept {
  const std::size_t uncaptured_pos = positives - prefix.captured_positives;
  const std::size_t uncaptured = n_examples - prefix.captured.count();
  return prefix.errors_captured +
         (label ? uncaptured - uncaptured_pos : uncaptured_pos);
}

struct CaptureDelta {
  std::size_t newly = 0;      // previously uncaptured examples the term captures
  std::size_t newly_pos = 0;  // ... of which are positive

  std::size_t errors_for(Label label) const noexcept {
    return label ? newly - newly_pos : newly_pos;
  }
};

inline CaptureDelta capture_delta(const BitVector& captured,
                                  const BitVector& term_capture,
                                  const BitVector& labels) noexcept {
  return {count_and_not(term_capture, captured),
          count_and_not_and(term_capture, captured, labels)};
}

// Appends a rule; throws DuplicateTerm when the term is already used.
Prefix extend(const Prefix& prefix, Rule rule, const Vocabulary& vocabulary,
              const BinaryDataset& dataset);

// False when `next` would break ascending term ids inside a run of
// equal-label rules.
inline bool is_canonical(std::span<const Rule> rules, Rule next) noexcept {
  return rules.empty() || rules.back().label != next.label ||
         rules.back().term_id < next.term_id;
}
inline bool is_canonical(const Prefix& prefix, Rule next) noexcept {
  return is_canonical(std::span<const Rule>(prefix.rules), next);
}

// Sorts every maximal equal-label run by term id.
RuleList canonicalize(RuleList list);

}  // namespace rashomon
