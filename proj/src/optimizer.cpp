#include "rashomon/optimizer.hpp"

#include <algorithm>
#include <queue>
#include <vector>

#include "rashomon/error.hpp"

namespace rashomon {
namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  std::int64_t bound;
  std::uint64_t seq;
  Prefix prefix;
};

struct NodeAfter {
  bool operator()(const Node& a, const Node& b) const noexcept {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const BinaryDataset& data, const Vocabulary& vocab,
                 const OptOptions& opts, std::span<const TermId> allowed,
                 std::span<const TermId> required)
      : data_(data),
        vocab_(vocab),
        opts_(opts),
        cost_(CostModel::regularized(data.n_examples(), opts.lambda)),
        n_(data.n_examples()),
        positives_(positive_count(data)),
        start_(Clock::now()) {
    allowed_.assign(allowed.begin(), allowed.end());
    std::sort(allowed_.begin(), allowed_.end());
    allowed_.erase(std::unique(allowed_.begin(), allowed_.end()), allowed_.end());
    for (TermId id : allowed_) {
      if (id >= vocab.size()) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "allowed term " + std::to_string(id) + " outside vocabulary");
      }
    }
    required_.assign(required.begin(), required.end());
    std::sort(required_.begin(), required_.end());
    required_.erase(std::unique(required_.begin(), required_.end()), required_.end());
    for (TermId id : required_) {
      if (!std::binary_search(allowed_.begin(), allowed_.end(), id)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "required term " + std::to_string(id) + " is not allowed");
      }
    }
    if (opts.timeout) deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(*opts.timeout);
  }

  OptResult run() {
    if (opts_.max_total_len < 1) {
      throw Error(ErrorCode::kInvalidArgument, "max_total_len must be >= 1");
    }
    Node root{cost_.cost(0, 1), seq_++, Prefix::empty(n_)};
    // The root is always evaluated so that a best-so-far exists.
    process(root, /*depth_first=*/false);
    while (!open_.empty()) {
      if (deadline_ && Clock::now() >= *deadline_) {
        result_.complete = false;
        break;
      }
      // priority_queue::top is const; the node is copied out before pop.
      Node node = open_.top();
      open_.pop();
      if (have_best_ && node.bound > best_score_) break;
      process(node, open_.size() >= opts_.queue_cap);
      if (aborted_) break;
    }
    result_.feasible = have_best_;
    result_.best_score = best_score_;
    result_.best_risk =
        n_ ? static_cast<double>(result_.best_errors) / static_cast<double>(n_) : 0.0;
    result_.best_objective =
        result_.best_risk + opts_.lambda * static_cast<double>(result_.best.length());
    result_.elapsed = Clock::now() - start_;
    return result_;
  }

 private:
  // Required terms the prefix still lacks.
  std::size_t missing_required(const Prefix& prefix) const {
    std::size_t missing = 0;
    for (TermId id : required_) missing += !prefix.contains(id);
    return missing;
  }

  void offer(const Prefix& prefix, Label label) {
    if (!required_.empty() && missing_required(prefix) > 0) return;
    const std::size_t errors = errors_with_default(prefix, label, n_, positives_);
    const std::int64_t score = cost_.cost(errors, prefix.size() + 1);
    if (!have_best_ || score < best_score_ ||
        (score == best_score_ &&
         tie_break_less(RuleList{prefix.rules, label}, result_.best))) {
      have_best_ = true;
      best_score_ = score;
      result_.best = RuleList{prefix.rules, label};
      result_.best_errors = errors;
    }
  }

  void process(const Node& node, bool depth_first) {
    ++result_.nodes_visited;
    const Prefix& prefix = node.prefix;
    offer(prefix, 0);
    offer(prefix, 1);
    if (prefix.size() + 1 >= opts_.max_total_len) return;

    for (TermId t : allowed_) {
      if (prefix.contains(t)) continue;
      const auto& capture = vocab_[t].capture;
      const auto delta = capture_delta(prefix.captured, capture, data_.labels());
      if (delta.newly < opts_.min_capture) continue;
      for (Label y : {Label{0}, Label{1}}) {
        const Rule rule{t, y};
        if (!is_canonical(prefix, rule)) continue;
        const std::size_t child_errors = prefix.errors_captured + delta.errors_for(y);
        const std::int64_t bound = cost_.cost(child_errors, prefix.size() + 2);
        if (have_best_ && bound > best_score_) continue;
        Node child{bound, seq_++, prefix};
        child.prefix.rules.push_back(rule);
        if (!required_.empty() &&
            missing_required(child.prefix) + child.prefix.size() + 1 > opts_.max_total_len) {
          continue;
        }
        child.prefix.captured |= capture;
        child.prefix.errors_captured = child_errors;
        child.prefix.captured_positives += delta.newly_pos;
        child.prefix.last_newly_captured = delta.newly;
        if (depth_first) {
          if (deadline_ && Clock::now() >= *deadline_) {
            result_.complete = false;
            aborted_ = true;
            return;
          }
          process(child, true);
          if (aborted_) return;
        } else {
          open_.push(std::move(child));
          result_.peak_queue = std::max(result_.peak_queue, open_.size());
        }
      }
    }
  }

  const BinaryDataset& data_;
  const Vocabulary& vocab_;
  const OptOptions& opts_;
  CostModel cost_;
  std::size_t n_;
  std::size_t positives_;
  std::vector<TermId> allowed_;
  std::vector<TermId> required_;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;
  std::priority_queue<Node, std::vector<Node>, NodeAfter> open_;
  std::uint64_t seq_ = 0;
  bool have_best_ = false;
  bool aborted_ = false;
  std::int64_t best_score_ = 0;
  OptResult result_;
};

}  // namespace

OptResult fit_optimal_restricted(const BinaryDataset& dataset,
                                 const Vocabulary& vocabulary,
                                 const OptOptions& options,
                                 std::span<const TermId> allowed,
                                 std::span<const TermId> required) {
  if (vocabulary.n_examples() != dataset.n_examples()) {
    throw Error(ErrorCode::kLengthMismatch, "vocabulary captures do not match dataset");
  }
  return BranchAndBound(dataset, vocabulary, options, allowed, required).run();
}

OptResult fit_optimal(const BinaryDataset& dataset, const Vocabulary& vocabulary,
                      const OptOptions& options) {
  if (vocabulary.empty()) {
    throw Error(ErrorCode::kEmptyVocabulary, "cannot fit with an empty vocabulary");
  }
  std::vector<TermId> all(vocabulary.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<TermId>(i);
  return fit_optimal_restricted(dataset, vocabulary, options, all);
}

}  // namespace rashomon
