#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>

#include "rashomon/dataset.hpp"
#include "rashomon/rule_list.hpp"
#include "rashomon/vocabulary.hpp"

namespace rashomon {

using Seconds = std::chrono::duration<double>;

struct OptOptions {
  std::size_t max_total_len = 3;  // default rule included
  double lambda = 0.0;
  std::size_t min_capture = 1;
  std::optional<Seconds> timeout;
  // Above this many open nodes, expansion continues depth-first.
  std::size_t queue_cap = std::size_t{1} << 20;
};

struct OptResult {
  RuleList best;
  std::size_t best_errors = 0;
  std::int64_t best_score = 0;  // CostModel::regularized units
  double best_risk = 0.0;
  double best_objective = 0.0;
  std::size_t nodes_visited = 0;
  std::size_t peak_queue = 0;
  Seconds elapsed{0};
  bool complete = true;
  // False when no list satisfies the constraints (only possible with
  // required terms); `best` is then meaningless.
  bool feasible = true;
};

// Best-first branch and bound for the rule list of length <= max_total_len
// minimizing risk + lambda * length over canonical lists in which every
// non-default rule captures at least min_capture new examples. Ties go to
// tie_break_less. On timeout the incumbent is returned with complete=false.
OptResult fit_optimal(const BinaryDataset& dataset, const Vocabulary& vocabulary,
                      const OptOptions& options);

// Same search restricted to `allowed` term ids (may be empty, leaving only
// the two constant lists). Every id in `required` must then appear in the
// returned list.
OptResult fit_optimal_restricted(const BinaryDataset& dataset,
                                 const Vocabulary& vocabulary,
                                 const OptOptions& options,
                                 std::span<const TermId> allowed,
                                 std::span<const TermId> required = {});

}  // namespace rashomon
