#include "rashomon/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "support/errors.hpp"
#include "support/toy.hpp"

namespace rashomon {
namespace {

using testing_support::bits;
using testing_support::code_of;

BitVector random_bits(std::mt19937_64& rng, std::size_t n) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, rng() & 1);
  return v;
}

RashomonSet set_of(const BitVector& ref, const std::vector<BitVector>& preds) {
  RashomonSet s;
  s.reference_predictions = ref;
  for (const auto& p : preds) s.members.push_back(RashomonMember{{}, 0.0, p});
  return s;
}

// Per-position oracle on plain vectors.
double oracle_ambiguity(const std::vector<BitVector>& preds, const BitVector& ref) {
  std::size_t hits = 0;
  for (std::size_t n = 0; n < ref.size(); ++n) {
    bool any = false;
    for (const auto& p : preds) any = any || p.test(n) != ref.test(n);
    hits += any;
  }
  return static_cast<double>(hits) / static_cast<double>(ref.size());
}

double oracle_discrepancy(const std::vector<BitVector>& preds, const BitVector& ref) {
  std::size_t best = 0;
  for (const auto& p : preds) {
    std::size_t d = 0;
    for (std::size_t n = 0; n < ref.size(); ++n) d += p.test(n) != ref.test(n);
    best = std::max(best, d);
  }
  return static_cast<double>(best) / static_cast<double>(ref.size());
}

TEST(HammingTest, Examples) {
  EXPECT_EQ(hamming_distance(bits({1, 1, 0, 0}), bits({0, 1, 1, 0})), 0.5);
  EXPECT_EQ(hamming_distance(bits({1, 0, 1}), bits({1, 0, 1})), 0.0);
  EXPECT_EQ(code_of([] { hamming_distance(bits({1}), bits({1, 0})); }), ErrorCode::kLengthMismatch);
}

TEST(MultiplicityTest, ReferenceAloneIsZero) {
  const auto ref = bits({1, 1, 0, 0});
  const auto s = set_of(ref, {ref});
  EXPECT_EQ(discrepancy(s), 0.0);
  EXPECT_EQ(ambiguity(s), 0.0);
}

TEST(MultiplicityTest, ToyPair) {
  const auto ref = bits({1, 1, 0, 0});
  const auto s = set_of(ref, {ref, bits({0, 1, 1, 0})});
  EXPECT_EQ(discrepancy(s), 0.5);
  EXPECT_EQ(ambiguity(s), 0.5);
  const auto report = multiplicity(s);
  EXPECT_EQ(report.per_model_distance, (std::vector<double>{0.0, 0.5}));
}

TEST(MultiplicityTest, EmptySetRejected) {
  EXPECT_EQ(code_of([] { discrepancy(set_of(bits({1, 0}), {})); }), ErrorCode::kEmptySet);
  EXPECT_EQ(code_of([] { ambiguity(set_of(bits({1, 0}), {})); }), ErrorCode::kEmptySet);
}

TEST(MultiplicityPropertyTest, MatchesOracleAndIdentitiesHold) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 150;
    const auto ref = random_bits(rng, n);
    std::vector<BitVector> preds;
    const std::size_t m = 1 + rng() % 12;
    MultiplicityAccumulator acc(ref);
    double prev_amb = 0.0, prev_disc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      preds.push_back(random_bits(rng, n));
      acc.add(preds.back());
      // Growing the set never lowers either metric.
      EXPECT_GE(acc.ambiguity(), prev_amb);
      EXPECT_GE(acc.discrepancy(), prev_disc);
      prev_amb = acc.ambiguity();
      prev_disc = acc.discrepancy();
    }
    EXPECT_LE(acc.discrepancy(), acc.ambiguity());
    EXPECT_EQ(acc.ambiguity(), oracle_ambiguity(preds, ref));
    EXPECT_EQ(acc.discrepancy(), oracle_discrepancy(preds, ref));
    EXPECT_EQ(acc.ambiguity(), ambiguity(set_of(ref, preds)));
    EXPECT_EQ(acc.discrepancy(), discrepancy(set_of(ref, preds)));
  }
}

TEST(MultiplicityPropertyTest, MergeIsOrderIndependent) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 70;
    const auto ref = random_bits(rng, n);
    MultiplicityAccumulator whole(ref), left(ref), right(ref);
    for (int i = 0; i < 10; ++i) {
      const auto p = random_bits(rng, n);
      whole.add(p);
      (i % 3 == 0 ? left : right).add(p);
    }
    MultiplicityAccumulator lr = left;
    lr.merge(right);
    MultiplicityAccumulator rl = right;
    rl.merge(left);
    EXPECT_EQ(lr.ambiguity(), whole.ambiguity());
    EXPECT_EQ(rl.discrepancy(), whole.discrepancy());
    EXPECT_EQ(lr.disagreement_mask(), rl.disagreement_mask());
    EXPECT_EQ(lr.size(), 10u);
  }
}

TEST(FairnessTest, Examples) {
  const SensitiveVector z{bits({1, 0, 1, 0}), "z"};
  EXPECT_EQ(demographic_parity(bits({1, 1, 0, 0}), z), 0.0);
  EXPECT_EQ(demographic_parity(bits({1, 1, 1, 1}), z), 0.0);
  EXPECT_EQ(demographic_parity(bits({1, 0, 0, 0}), z), 0.5);
  EXPECT_EQ(demographic_parity(bits({0, 1, 0, 0}), z), -0.5);
  const auto y = bits({1, 1, 0, 0});
  EXPECT_EQ(equal_opportunity(bits({1, 1, 0, 0}), z, y), 0.0);
  EXPECT_EQ(equal_opportunity(y, z, y), 0.0);
  EXPECT_EQ(equal_opportunity(bits({0, 1, 1, 0}), z, y), -1.0);
}

TEST(FairnessTest, EmptyGroupIsAnError) {
  const SensitiveVector all_one{bits({1, 1, 1}), "z"};
  EXPECT_EQ(code_of([&] { demographic_parity(bits({1, 0, 1}), all_one); }),
            ErrorCode::kEmptyGroup);
  const SensitiveVector z{bits({1, 0, 1}), "z"};
  // No positive example in group z=0.
  EXPECT_EQ(code_of([&] { equal_opportunity(bits({1, 0, 1}), z, bits({1, 0, 0})); }),
            ErrorCode::kEmptyGroup);
}

TEST(FairnessPropertyTest, PermutationInvariant) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng() % 60;
    auto p = random_bits(rng, n), zb = random_bits(rng, n), y = random_bits(rng, n);
    zb.set(0, true);
    zb.set(1, false);
    y.set(0, true);
    y.set(1, true);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    BitVector pp(n), zp(n), yp(n);
    for (std::size_t i = 0; i < n; ++i) {
      pp.set(i, p.test(perm[i]));
      zp.set(i, zb.test(perm[i]));
      yp.set(i, y.test(perm[i]));
    }
    const SensitiveVector z{zb, "z"}, zq{zp, "z"};
    EXPECT_EQ(demographic_parity(p, z), demographic_parity(pp, zq));
    EXPECT_EQ(equal_opportunity(p, z, y), equal_opportunity(pp, zq, yp));
  }
}

TEST(UnfairnessRangeTest, SingletonAndPair) {
  const SensitiveVector z{bits({1, 0, 1, 0}), "z"};
  const auto y = bits({1, 1, 0, 0});
  auto s = set_of(bits({1, 1, 0, 0}), {bits({1, 0, 0, 0})});
  auto r = unfairness_range(s, z, y, FairnessCriterion::kDemographicParity);
  EXPECT_EQ(r.lo, 0.5);
  EXPECT_EQ(r.hi, 0.5);

  s = set_of(bits({1, 1, 0, 0}), {bits({1, 0, 0, 0}), bits({0, 1, 0, 0}), bits({1, 1, 0, 0})});
  r = unfairness_range(s, z, y, FairnessCriterion::kDemographicParity);
  EXPECT_EQ(r.lo, -0.5);
  EXPECT_EQ(r.hi, 0.5);
  EXPECT_EQ(r.per_model_score, (std::vector<double>{0.5, -0.5, 0.0}));

  EXPECT_EQ(code_of([&] {
              unfairness_range(set_of(bits({1, 0, 0, 0}), {}), z, y,
                               FairnessCriterion::kEqualOpportunity);
            }),
            ErrorCode::kEmptySet);
}

TEST(UnfairnessRangeTest, AccumulatorMerges) {
  UnfairnessAccumulator a(FairnessCriterion::kDemographicParity);
  UnfairnessAccumulator b(FairnessCriterion::kDemographicParity);
  a.add(0.1);
  a.add(-0.2);
  b.add(0.4);
  a.merge(b);
  const auto r = a.range();
  EXPECT_EQ(r.lo, -0.2);
  EXPECT_EQ(r.hi, 0.4);
  EXPECT_EQ(r.per_model_score.size(), 3u);
  EXPECT_EQ(code_of([] { UnfairnessAccumulator(FairnessCriterion::kDemographicParity).range(); }),
            ErrorCode::kEmptySet);
}

}  // namespace
}  // namespace rashomon
