#include "rashomon/metrics.hpp"

#include <algorithm>

#include "rashomon/error.hpp"

namespace rashomon {

double hamming_distance(const BitVector& p, const BitVector& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "prediction vectors of length " + std::to_string(p.size()) + " and " +
                    std::to_string(q.size()));
  }
  if (p.size() == 0) return 0.0;
  return static_cast<double>(count_xor(p, q)) / static_cast<double>(p.size());
}

MultiplicityAccumulator::MultiplicityAccumulator(BitVector reference, bool keep_distances)
    : reference_(std::move(reference)),
      any_disagree_(reference_.size()),
      keep_distances_(keep_distances),
      scratch_(reference_.size()) {}

void MultiplicityAccumulator::add(const BitVector& predictions) {
  if (predictions.size() != reference_.size()) {
    throw Error(ErrorCode::kLengthMismatch, "prediction vector length differs from reference");
  }
  scratch_ = predictions;
  scratch_ ^= reference_;
  const std::size_t d = scratch_.count();
  any_disagree_ |= scratch_;
  max_disagree_ = std::max(max_disagree_, d);
  ++count_;
  if (keep_distances_) {
    distances_.push_back(reference_.size()
                             ? static_cast<double>(d) / static_cast<double>(reference_.size())
                             : 0.0);
  }
}

void MultiplicityAccumulator::merge(const MultiplicityAccumulator& other) {
  if (other.reference_ != reference_) {
    throw Error(ErrorCode::kInvalidArgument, "cannot merge accumulators with different references");
  }
  any_disagree_ |= other.any_disagree_;
  max_disagree_ = std::max(max_disagree_, other.max_disagree_);
  count_ += other.count_;
  distances_.insert(distances_.end(), other.distances_.begin(), other.distances_.end());
}

double MultiplicityAccumulator::ambiguity() const {
  if (count_ == 0) throw Error(ErrorCode::kEmptySet, "no models accumulated");
  if (reference_.size() == 0) return 0.0;
  return static_cast<double>(any_disagree_.count()) /
         static_cast<double>(reference_.size());
}

double MultiplicityAccumulator::discrepancy() const {
  if (count_ == 0) throw Error(ErrorCode::kEmptySet, "no models accumulated");
  if (reference_.size() == 0) return 0.0;
  return static_cast<double>(max_disagree_) / static_cast<double>(reference_.size());
}

MultiplicityReport MultiplicityAccumulator::report() const {
  return {ambiguity(), discrepancy(), distances_};
}

namespace {

MultiplicityAccumulator accumulate(const RashomonSet& set, bool keep) {
  if (set.members.empty()) throw Error(ErrorCode::kEmptySet, "Rashomon set has no members");
  MultiplicityAccumulator acc(set.reference_predictions, keep);
  for (const auto& m : set.members) acc.add(m.predictions);
  return acc;
}

}  // namespace

double discrepancy(const RashomonSet& set) { return accumulate(set, false).discrepancy(); }
double ambiguity(const RashomonSet& set) { return accumulate(set, false).ambiguity(); }
MultiplicityReport multiplicity(const RashomonSet& set) {
  return accumulate(set, true).report();
}

FairnessScorer::FairnessScorer(const BitVector& sensitive, const BitVector& labels)
    : z1_(sensitive), z0_(~sensitive), y1z1_(sensitive & labels), y1z0_(~sensitive & labels) {
  if (sensitive.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "sensitive attribute and labels differ in length");
  }
  n_z1_ = z1_.count();
  n_z0_ = z0_.count();
  n_y1z1_ = y1z1_.count();
  n_y1z0_ = y1z0_.count();
}

namespace {

double rate_difference(const BitVector& p, const BitVector& g1, std::size_t n1,
                       const BitVector& g0, std::size_t n0, const char* what) {
  if (p.size() != g1.size()) {
    throw Error(ErrorCode::kLengthMismatch, "prediction vector length differs from groups");
  }
  if (n1 == 0 || n0 == 0) {
    throw Error(ErrorCode::kEmptyGroup, std::string(what) + ": a sensitive group is empty");
  }
  return static_cast<double>(count_and(p, g1)) / static_cast<double>(n1) -
         static_cast<double>(count_and(p, g0)) / static_cast<double>(n0);
}

}  // namespace

double FairnessScorer::demographic_parity(const BitVector& p) const {
  return rate_difference(p, z1_, n_z1_, z0_, n_z0_, "demographic parity");
}

double FairnessScorer::equal_opportunity(const BitVector& p) const {
  return rate_difference(p, y1z1_, n_y1z1_, y1z0_, n_y1z0_, "equal opportunity");
}

double FairnessScorer::score(FairnessCriterion criterion, const BitVector& p) const {
  return criterion == FairnessCriterion::kDemographicParity ? demographic_parity(p)
                                                            : equal_opportunity(p);
}

double demographic_parity(const BitVector& predictions, const SensitiveVector& z) {
  return FairnessScorer(z.values, BitVector(z.values.size())).demographic_parity(predictions);
}

double equal_opportunity(const BitVector& predictions, const SensitiveVector& z,
                         const BitVector& labels) {
  return FairnessScorer(z.values, labels).equal_opportunity(predictions);
}

void UnfairnessAccumulator::add(double score) {
  lo_ = std::min(lo_, score);
  hi_ = std::max(hi_, score);
  ++count_;
  if (keep_scores_) scores_.push_back(score);
}

void UnfairnessAccumulator::merge(const UnfairnessAccumulator& other) {
  lo_ = std::min(lo_, other.lo_);
  hi_ = std::max(hi_, other.hi_);
  count_ += other.count_;
  scores_.insert(scores_.end(), other.scores_.begin(), other.scores_.end());
}

UnfairnessRange UnfairnessAccumulator::range() const {
  if (count_ == 0) throw Error(ErrorCode::kEmptySet, "no scores accumulated");
  return {criterion_, lo_, hi_, scores_};
}

UnfairnessRange unfairness_range(const RashomonSet& set, const SensitiveVector& z,
                                 const BitVector& labels, FairnessCriterion criterion) {
  if (set.members.empty()) throw Error(ErrorCode::kEmptySet, "Rashomon set has no members");
  const FairnessScorer scorer(z.values, labels);
  UnfairnessAccumulator acc(criterion);
  for (const auto& m : set.members) acc.add(scorer.score(criterion, m.predictions));
  return acc.range();
}

}  // namespace rashomon
