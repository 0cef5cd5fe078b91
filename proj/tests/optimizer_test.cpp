#include "rashomon/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracle/brute_force.hpp"
#include "support/errors.hpp"
#include "support/random_instance.hpp"
#include "support/toy.hpp"

namespace rashomon {
namespace {

using testing_support::code_of;
using testing_support::toy_dataset;
using testing_support::toy_vocabulary;

OptOptions opts(std::size_t len, double lambda) {
  OptOptions o;
  o.max_total_len = len;
  o.lambda = lambda;
  return o;
}

TEST(FitOptimalTest, ToyBestIsRuleOnA) {
  const auto r = fit_optimal(toy_dataset(), toy_vocabulary(), opts(2, 0.0));
  EXPECT_EQ(r.best, (RuleList{{{0, 1}}, 0}));
  EXPECT_EQ(r.best_objective, 0.0);
  EXPECT_EQ(r.best_errors, 0u);
  EXPECT_TRUE(r.complete);
}

TEST(FitOptimalTest, LengthOneGivesConstantZero) {
  const auto r = fit_optimal(toy_dataset(), toy_vocabulary(), opts(1, 0.0));
  EXPECT_EQ(r.best, (RuleList{{}, 0}));
  EXPECT_EQ(r.best_objective, 0.5);
}

TEST(FitOptimalTest, LargePenaltyPicksConstant) {
  const auto r = fit_optimal(toy_dataset(), toy_vocabulary(), opts(3, 10.0));
  EXPECT_TRUE(r.best.rules.empty());
  EXPECT_DOUBLE_EQ(r.best_objective, 10.5);
}

TEST(FitOptimalTest, Errors) {
  EXPECT_EQ(code_of([] { fit_optimal(toy_dataset(), Vocabulary(), opts(2, 0.0)); }),
            ErrorCode::kEmptyVocabulary);
  EXPECT_EQ(code_of([] { fit_optimal(toy_dataset(), toy_vocabulary(), opts(0, 0.0)); }),
            ErrorCode::kInvalidArgument);
}

TEST(FitOptimalTest, ZeroBudgetReturnsIncumbentFlaggedIncomplete) {
  OptOptions o = opts(3, 0.0);
  o.timeout = Seconds(0);
  const auto inst = testing_support::make_instance(3);
  const auto r = fit_optimal(inst.dataset, inst.vocabulary, o);
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.best_errors,
            misclassification_count(r.best, inst.vocabulary, inst.dataset.labels()));
}

TEST(FitOptimalTest, RestrictedToNothingLeavesConstants) {
  const std::vector<TermId> none;
  const auto r = fit_optimal_restricted(toy_dataset(), toy_vocabulary(), opts(3, 0.0), none);
  EXPECT_TRUE(r.best.rules.empty());
}

double brute_min(const testing_support::RandomInstance& inst, std::size_t len, double lambda) {
  return static_cast<double>(oracle::min_objective(inst.oracle, len, 1, lambda));
}

TEST(FitOptimalPropertyTest, MatchesExhaustiveMinimum) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto inst = testing_support::make_instance(seed);
    for (std::size_t len : {1, 2, 3}) {
      for (double lambda : {0.0, 0.015, 0.1}) {
        const auto r = fit_optimal(inst.dataset, inst.vocabulary, opts(len, lambda));
        ASSERT_TRUE(r.complete);
        EXPECT_NEAR(r.best_objective, brute_min(inst, len, lambda), 1e-12)
            << "seed " << seed << " len " << len << " lambda " << lambda;
        EXPECT_NEAR(r.best_objective,
                    objective(r.best, inst.dataset, inst.vocabulary, lambda), 1e-12);
        EXPECT_LE(r.best.length(), len);
      }
    }
  }
}

TEST(FitOptimalPropertyTest, DepthFirstFallbackKeepsOptimum) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testing_support::make_instance(seed);
    OptOptions o = opts(3, 0.015);
    o.queue_cap = 2;
    const auto r = fit_optimal(inst.dataset, inst.vocabulary, o);
    const auto full = fit_optimal(inst.dataset, inst.vocabulary, opts(3, 0.015));
    EXPECT_EQ(r.best_score, full.best_score);
    EXPECT_EQ(r.best, full.best);
  }
}

TEST(FitOptimalPropertyTest, MonotoneInLengthAndPenalty) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testing_support::make_instance(seed);
    double prev = 2.0;
    for (std::size_t len : {1, 2, 3}) {
      const double o = fit_optimal(inst.dataset, inst.vocabulary, opts(len, 0.01)).best_objective;
      EXPECT_LE(o, prev + 1e-12);
      prev = o;
    }
    prev = -1.0;
    for (double lambda : {0.0, 0.01, 0.05, 0.2}) {
      const double o = fit_optimal(inst.dataset, inst.vocabulary, opts(3, lambda)).best_objective;
      EXPECT_GE(o, prev - 1e-12);
      prev = o;
    }
  }
}

TEST(FitOptimalPropertyTest, TermOrderDoesNotChangeMinimum) {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testing_support::make_instance(seed);
    auto terms = inst.vocabulary.terms();
    std::shuffle(terms.begin(), terms.end(), rng);
    const Vocabulary shuffled(terms, inst.dataset.n_examples());
    const auto a = fit_optimal(inst.dataset, inst.vocabulary, opts(3, 0.015));
    const auto b = fit_optimal(inst.dataset, shuffled, opts(3, 0.015));
    EXPECT_EQ(a.best_score, b.best_score);
  }
}

}  // namespace
}  // namespace rashomon
