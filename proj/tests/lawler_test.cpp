#include "rashomon/lawler.hpp"

#include <set>

#include "gtest/gtest.h"
#include "oracle/brute_force.hpp"
#include "support/errors.hpp"
#include "support/random_instance.hpp"
#include "support/toy.hpp"

namespace rashomon {
namespace {

using testing_support::code_of;
using testing_support::make_instance;
using testing_support::toy_dataset;
using testing_support::toy_vocabulary;

TopKOptions options(std::size_t len, double lambda, std::size_t k,
                    TopKBranching branching = TopKBranching::kRemoveTerm) {
  TopKOptions o;
  o.max_total_len = len;
  o.lambda = lambda;
  o.k = k;
  o.branching = branching;
  return o;
}

// Compares answer objectives with oracle scores in units of 1 / (N * den).
void expect_objectives(const TopKResult& r, std::vector<std::int64_t> expected,
                       std::size_t n, std::int64_t den, std::size_t k) {
  if (expected.size() > k) expected.resize(k);
  ASSERT_EQ(r.answers.size(), expected.size());
  const double scale = static_cast<double>(n) * static_cast<double>(den);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(r.answers[i].objective, static_cast<double>(expected[i]) / scale, 1e-12)
        << "rank " << i;
  }
}

TEST(TopKTest, ToySecondAnswerAvoidsTermA) {
  const auto r = topk(toy_dataset(), toy_vocabulary(), options(2, 0.0, 2));
  ASSERT_EQ(r.answers.size(), 2u);
  EXPECT_EQ(r.answers[0].rule_list, (RuleList{{{0, 1}}, 0}));
  EXPECT_EQ(r.answers[0].objective, 0.0);
  // Best list without term a: every such list errs on two of four examples.
  EXPECT_EQ(r.answers[1].objective, 0.5);
  EXPECT_EQ(r.answers[1].rule_list, (RuleList{{}, 0}));
}

TEST(TopKTest, KOneIsTheOptimum) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = make_instance(seed);
    OptOptions o;
    o.lambda = 0.015;
    const auto best = fit_optimal(inst.dataset, inst.vocabulary, o);
    const auto r = topk(inst.dataset, inst.vocabulary, options(3, 0.015, 1));
    ASSERT_EQ(r.answers.size(), 1u);
    EXPECT_EQ(r.answers[0].rule_list, best.best);
    EXPECT_EQ(r.answers[0].score, best.best_score);
  }
}

TEST(TopKTest, ExhaustsQueueWhenKTooLarge) {
  const auto r = topk(toy_dataset(), toy_vocabulary(), options(2, 0.0, 50));
  EXPECT_TRUE(r.complete);
  EXPECT_LT(r.answers.size(), 50u);
  EXPECT_EQ(r.seen_term_sets.size(), r.answers.size());
}

TEST(TopKTest, ZeroBudgetIsIncompleteAndEmpty) {
  auto o = options(3, 0.0, 5);
  o.timeout = Seconds(0);
  const auto r = topk(toy_dataset(), toy_vocabulary(), o);
  EXPECT_FALSE(r.complete);
  EXPECT_TRUE(r.answers.empty());
}

TEST(TopKTest, Errors) {
  EXPECT_EQ(code_of([] { topk(toy_dataset(), toy_vocabulary(), options(2, 0.0, 0)); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { topk(toy_dataset(), Vocabulary(), options(2, 0.0, 1)); }),
            ErrorCode::kEmptyVocabulary);
}

// The removal-only scheme returns, in score order, the distinct term sets
// that are optimal for some subset of the vocabulary.
TEST(TopKPropertyTest, RemoveTermMatchesSubsetOptima) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = make_instance(seed);
    for (auto [num, den] : {std::pair<std::int64_t, std::int64_t>{0, 1}, {15, 1000}, {1, 10}}) {
      const double lambda = static_cast<double>(num) / static_cast<double>(den);
      const auto r = topk(inst.dataset, inst.vocabulary, options(3, lambda, 10));
      SCOPED_TRACE("seed " + std::to_string(seed) + " lambda " + std::to_string(lambda));
      expect_objectives(r, oracle::subset_optimum_scores(inst.oracle, 3, 1, num, den),
                        inst.dataset.n_examples(), den, 10);
    }
  }
}

TEST(TopKPropertyTest, PartitionMatchesBestTermSets) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = make_instance(seed);
    for (auto [num, den] : {std::pair<std::int64_t, std::int64_t>{0, 1}, {15, 1000}, {1, 10}}) {
      const double lambda = static_cast<double>(num) / static_cast<double>(den);
      const auto r = topk(inst.dataset, inst.vocabulary,
                          options(3, lambda, 10, TopKBranching::kPartition));
      SCOPED_TRACE("seed " + std::to_string(seed) + " lambda " + std::to_string(lambda));
      expect_objectives(r, oracle::term_set_scores(inst.oracle, 3, 1, num, den),
                        inst.dataset.n_examples(), den, 10);
    }
  }
}

TEST(TopKPropertyTest, AnswersOrderedWithDistinctTermSets) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = make_instance(seed);
    for (auto branching : {TopKBranching::kRemoveTerm, TopKBranching::kPartition}) {
      const auto r = topk(inst.dataset, inst.vocabulary, options(3, 0.015, 10, branching));
      std::set<std::vector<TermId>> sets;
      for (std::size_t i = 0; i < r.answers.size(); ++i) {
        if (i > 0) EXPECT_LE(r.answers[i - 1].score, r.answers[i].score);
        EXPECT_TRUE(sets.insert(term_set(r.answers[i].rule_list)).second);
      }
    }
  }
}

TEST(TopKPropertyTest, SeenSetMemoryGrowsWithAnswers) {
  const auto inst = make_instance(4);
  const auto small = topk(inst.dataset, inst.vocabulary, options(3, 0.0, 2));
  const auto large = topk(inst.dataset, inst.vocabulary, options(3, 0.0, 8));
  ASSERT_GT(large.answers.size(), small.answers.size());
  EXPECT_GT(large.stats.seen_set_bytes, small.stats.seen_set_bytes);
}

}  // namespace
}  // namespace rashomon
