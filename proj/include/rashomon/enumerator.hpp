#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rashomon/dataset.hpp"
#include "rashomon/optimizer.hpp"
#include "rashomon/rule_list.hpp"
#include "rashomon/vocabulary.hpp"

namespace rashomon {

// Each flag selects whether a membership condition cuts a subtree as soon
// as it fails (on) or is checked only when a list is emitted (off). The
// emitted set is the same either way; only the work differs.
struct Prunings {
  bool lower_bound = true;
  bool min_support = true;
  bool symmetry = true;
};

enum class EmitOrder { kDfs, kSorted };

struct EnumConfig {
  std::size_t max_total_len = 3;  // default rule included
  // Score function; the threshold is expressed in its integer units.
  CostModel cost;
  std::int64_t threshold = 0;
  std::size_t min_capture = 1;
  Prunings prunings;
  // kSorted buffers every solution before emitting.
  EmitOrder emit_order = EmitOrder::kDfs;
  // >1 runs the root's subtrees concurrently; solutions are buffered per
  // subtree and emitted in the single-threaded order.
  std::size_t threads = 1;
  std::optional<Seconds> timeout;
};

struct Solution {
  RuleList list;
  std::size_t errors = 0;
  std::int64_t score = 0;  // EnumConfig::cost units
  double risk = 0.0;
  double objective = 0.0;  // risk + lambda * length
};

using SolutionSink = std::function<void(const Solution&)>;

struct EnumStats {
  std::size_t candidates_visited = 0;  // rule lists tested against the threshold
  std::size_t prefixes_visited = 0;
  std::size_t solutions = 0;
  Seconds elapsed{0};
  std::size_t peak_queue_depth = 0;  // deepest prefix on the DFS stack
  std::size_t peak_live_bytes = 0;   // search workspace high-water mark
  bool complete = true;
};

// Largest error count e with e / n <= reference_risk + epsilon.
std::int64_t compute_threshold(double reference_risk, double epsilon, std::size_t n);

// Threshold in `cost` units for a reference scored `reference_score`.
std::int64_t threshold_from_reference(const CostModel& cost,
                                      std::int64_t reference_score, double epsilon);

// Streams every member of the bounded-length Rashomon set to `sink`, each
// exactly once, in depth-first order (or sorted by score when requested).
EnumStats enumerate_rashomon(const BinaryDataset& dataset,
                             const Vocabulary& vocabulary,
                             const EnumConfig& config, const SolutionSink& sink);

struct SweepOptions {
  std::size_t max_total_len = 3;
  ObjectiveMode mode = ObjectiveMode::kRisk;
  double lambda = 0.0;
  std::size_t min_capture = 1;
  Prunings prunings;
  std::size_t threads = 1;
  EmitOrder emit_order = EmitOrder::kDfs;
  std::optional<Seconds> timeout;
};

struct SweepResult {
  std::vector<double> epsilons;
  std::vector<std::int64_t> thresholds;
  std::vector<std::size_t> counts;  // cumulative: members of each R_eps
  std::vector<Solution> solutions;
  std::vector<std::size_t> bucket;  // smallest epsilon index admitting solutions[i]
  std::int64_t reference_score = 0;
  EnumStats stats;
};

using BucketedSink = std::function<void(const Solution&, std::size_t bucket)>;

// One enumeration at the largest tolerance, each solution tagged with the
// smallest tolerance admitting it. `epsilons` must be ascending.
EnumStats sweep_tolerances(const BinaryDataset& dataset, const Vocabulary& vocabulary,
                           const RuleList& reference, const std::vector<double>& epsilons,
                           const SweepOptions& options, const BucketedSink& sink,
                           std::vector<std::int64_t>* thresholds = nullptr);

SweepResult sweep_tolerances(const BinaryDataset& dataset, const Vocabulary& vocabulary,
                             const RuleList& reference,
                             const std::vector<double>& epsilons,
                             const SweepOptions& options);

}  // namespace rashomon
