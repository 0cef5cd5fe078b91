#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rashomon/optimizer.hpp"
#include "rashomon/rule_list.hpp"

namespace rashomon {

struct LawlerNode {
  std::int64_t score = 0;  // CostModel::regularized units
  std::uint64_t seq = 0;   // insertion order, breaks score ties
  RuleList rule_list;
  std::size_t errors = 0;
  std::vector<TermId> allowed_terms;   // sorted
  std::vector<TermId> excluded_terms;  // sorted
  std::vector<TermId> required_terms;  // sorted; used only by kPartition
};

struct TopKAnswer {
  std::int64_t score = 0;
  double objective = 0.0;
  double risk = 0.0;
  std::size_t errors = 0;
  RuleList rule_list;
};

struct TopKStats {
  std::size_t pops = 0;
  std::size_t refits = 0;
  std::size_t peak_queue = 0;
  std::size_t peak_seen_sets = 0;
  std::size_t seen_set_bytes = 0;  // payload held by the seen-term-set collection
  std::size_t queue_bytes = 0;     // payload of the open queue at its peak
  Seconds elapsed{0};
};

struct TopKResult {
  std::vector<TopKAnswer> answers;  // ascending score
  std::vector<std::vector<TermId>> seen_term_sets;
  bool complete = true;
  TopKStats stats;
};

// How a popped node is split into subproblems.
//  kRemoveTerm: one refit per used term with that term removed from the
//    allowed set. Term sets that are supersets of an earlier answer's set
//    are never reached, so answers are the distinct optima of vocabulary
//    subsets rather than the overall best term sets.
//  kPartition: with free used terms s1 < ... < sm, child i requires
//    s1..s(i-1) and removes si. The children partition the remaining term
//    sets, so answers are the K best term sets overall.
enum class TopKBranching { kRemoveTerm, kPartition };

struct TopKOptions {
  std::size_t max_total_len = 3;
  double lambda = 0.0;
  std::size_t k = 10;
  std::size_t min_capture = 1;
  TopKBranching branching = TopKBranching::kRemoveTerm;
  std::optional<Seconds> timeout;
};

// Lawler's scheme around fit_optimal: pop the cheapest node, report it if its
// term set is new, then refit once per used term with that term removed.
TopKResult topk(const BinaryDataset& dataset, const Vocabulary& vocabulary,
                const TopKOptions& options);

}  // namespace rashomon
