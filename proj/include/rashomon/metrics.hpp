#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "rashomon/bitvector.hpp"
#include "rashomon/dataset.hpp"
#include "rashomon/rule_list.hpp"

namespace rashomon {

struct RashomonMember {
  RuleList rule_list;
  double risk = 0.0;
  BitVector predictions;
};

// Reference model plus the enumerated members; the reference is expected to
// be among the members.
struct RashomonSet {
  RuleList reference;
  BitVector reference_predictions;
  std::vector<RashomonMember> members;
  double epsilon = 0.0;
  std::uint64_t dataset_fingerprint = 0;
};

struct MultiplicityReport {
  double ambiguity = 0.0;
  double discrepancy = 0.0;
  std::vector<double> per_model_distance;
};

enum class FairnessCriterion { kDemographicParity, kEqualOpportunity };

struct UnfairnessRange {
  FairnessCriterion criterion = FairnessCriterion::kDemographicParity;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> per_model_score;
};

// popcount(p XOR q) / N.
double hamming_distance(const BitVector& p, const BitVector& q);

// Streaming ambiguity/discrepancy against a fixed reference. State is one
// N-bit OR accumulator and the running maximum; accumulators over disjoint
// parts of a set merge associatively.
class MultiplicityAccumulator {
 public:
  explicit MultiplicityAccumulator(BitVector reference, bool keep_distances = false);

  void add(const BitVector& predictions);
  void merge(const MultiplicityAccumulator& other);

  std::size_t size() const noexcept { return count_; }
  double ambiguity() const;
  double discrepancy() const;
  std::size_t max_disagreements() const noexcept { return max_disagree_; }
  const BitVector& disagreement_mask() const noexcept { return any_disagree_; }
  const std::vector<double>& distances() const noexcept { return distances_; }
  MultiplicityReport report() const;

 private:
  BitVector reference_;
  BitVector any_disagree_;
  std::size_t max_disagree_ = 0;
  std::size_t count_ = 0;
  bool keep_distances_;
  std::vector<double> distances_;
  BitVector scratch_;
};

double discrepancy(const RashomonSet& set);
double ambiguity(const RashomonSet& set);
MultiplicityReport multiplicity(const RashomonSet& set);

// Group masks for a sensitive attribute, checked once so per-model scores
// are two popcounts each.
class FairnessScorer {
 public:
  FairnessScorer(const BitVector& sensitive, const BitVector& labels);

  // P(h=1 | z=1) - P(h=1 | z=0); throws EmptyGroup when a group is empty.
  double demographic_parity(const BitVector& predictions) const;
  // Same difference restricted to y=1.
  double equal_opportunity(const BitVector& predictions) const;
  double score(FairnessCriterion criterion, const BitVector& predictions) const;

 private:
  BitVector z1_, z0_, y1z1_, y1z0_;
  std::size_t n_z1_, n_z0_, n_y1z1_, n_y1z0_;
};

double demographic_parity(const BitVector& predictions, const SensitiveVector& z);
double equal_opportunity(const BitVector& predictions, const SensitiveVector& z,
                         const BitVector& labels);

class UnfairnessAccumulator {
 public:
  explicit UnfairnessAccumulator(FairnessCriterion criterion, bool keep_scores = true)
      : criterion_(criterion), keep_scores_(keep_scores) {}

  void add(double score);
  void merge(const UnfairnessAccumulator& other);
  bool empty() const noexcept { return count_ == 0; }
  // Throws EmptySet when nothing was added.
  UnfairnessRange range() const;

 private:
  FairnessCriterion criterion_;
  bool keep_scores_;
  std::size_t count_ = 0;
  double lo_ = std::numeric_limits<double>::infinity();
  double hi_ = -std::numeric_limits<double>::infinity();
  std::vector<double> scores_;
};

UnfairnessRange unfairness_range(const RashomonSet& set, const SensitiveVector& z,
                                 const BitVector& labels, FairnessCriterion criterion);

}  // namespace rashomon
