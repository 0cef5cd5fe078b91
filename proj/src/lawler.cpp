#include "rashomon/lawler.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "rashomon/error.hpp"

namespace rashomon {
namespace {

using Clock = std::chrono::steady_clock;

struct NodeAfter {
  bool operator()(const LawlerNode& a, const LawlerNode& b) const noexcept {
    if (a.score != b.score) return a.score > b.score;
    return a.seq > b.seq;
  }
};

std::size_t node_bytes(const LawlerNode& n) {
  return sizeof(LawlerNode) + n.rule_list.rules.capacity() * sizeof(Rule) +
         (n.allowed_terms.capacity() + n.excluded_terms.capacity() +
          n.required_terms.capacity()) *
             sizeof(TermId);
}

}  // namespace

TopKResult topk(const BinaryDataset& dataset, const Vocabulary& vocabulary,
                const TopKOptions& options) {
  if (options.k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (vocabulary.empty()) {
    throw Error(ErrorCode::kEmptyVocabulary, "cannot fit with an empty vocabulary");
  }
  const auto start = Clock::now();
  std::optional<Clock::time_point> deadline;
  if (options.timeout) {
    deadline = start + std::chrono::duration_cast<Clock::duration>(*options.timeout);
  }

  TopKResult result;
  std::priority_queue<LawlerNode, std::vector<LawlerNode>, NodeAfter> queue;
  std::size_t queue_bytes = 0;
  std::set<std::vector<TermId>> seen;
  std::uint64_t seq = 0;

  auto out_of_time = [&] { return deadline && Clock::now() >= *deadline; };

  // Returns false when the fit could not finish inside the budget.
  auto fit_and_push = [&](std::vector<TermId> allowed, std::vector<TermId> excluded,
                          std::vector<TermId> required) {
    OptOptions opt;
    opt.max_total_len = options.max_total_len;
    opt.lambda = options.lambda;
    opt.min_capture = options.min_capture;
    if (deadline) opt.timeout = std::chrono::duration_cast<Seconds>(*deadline - Clock::now());
    const OptResult fit = fit_optimal_restricted(dataset, vocabulary, opt, allowed, required);
    ++result.stats.refits;
    if (!fit.complete) return false;
    if (!fit.feasible) return true;  // empty subproblem
    LawlerNode node{fit.best_score, seq++,           fit.best,           fit.best_errors,
                    std::move(allowed), std::move(excluded), std::move(required)};
    queue_bytes += node_bytes(node);
    queue.push(std::move(node));
    result.stats.peak_queue = std::max(result.stats.peak_queue, queue.size());
    result.stats.queue_bytes = std::max(result.stats.queue_bytes, queue_bytes);
    return true;
  };

  std::vector<TermId> all(vocabulary.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<TermId>(i);
  if (out_of_time() || !fit_and_push(all, {}, {})) {
    result.complete = false;
  }

  const double n = static_cast<double>(dataset.n_examples());
  while (result.complete && !queue.empty() && result.answers.size() < options.k) {
    LawlerNode node = queue.top();
    queue.pop();
    queue_bytes -= node_bytes(node);
    ++result.stats.pops;

    auto terms = term_set(node.rule_list);
    if (!seen.contains(terms)) {
      TopKAnswer answer;
      answer.score = node.score;
      answer.errors = node.errors;
      answer.risk = n > 0 ? static_cast<double>(node.errors) / n : 0.0;
      answer.objective =
          answer.risk + options.lambda * static_cast<double>(node.rule_list.length());
      answer.rule_list = node.rule_list;
      result.answers.push_back(std::move(answer));
      result.stats.seen_set_bytes +=
          terms.capacity() * sizeof(TermId) + sizeof(std::vector<TermId>);
      seen.insert(terms);
      result.stats.peak_seen_sets = seen.size();
      if (result.answers.size() >= options.k) break;
    }
    // Children are generated for every pop, new term set or not.
    const bool partition = options.branching == TopKBranching::kPartition;
    std::vector<TermId> required = node.required_terms;
    for (TermId f : terms) {
      if (partition && std::binary_search(node.required_terms.begin(),
                                          node.required_terms.end(), f)) {
        continue;
      }
      if (out_of_time()) {
        result.complete = false;
        break;
      }
      std::vector<TermId> allowed;
      allowed.reserve(node.allowed_terms.size());
      for (TermId t : node.allowed_terms) {
        if (t != f) allowed.push_back(t);
      }
      auto excluded = node.excluded_terms;
      excluded.insert(std::upper_bound(excluded.begin(), excluded.end(), f), f);
      if (!fit_and_push(std::move(allowed), std::move(excluded),
                        partition ? required : std::vector<TermId>{})) {
        result.complete = false;
        break;
      }
      if (partition) required.insert(std::upper_bound(required.begin(), required.end(), f), f);
    }
    // Strict supersets of the popped set, split by their smallest extra term.
    if (partition && result.complete && terms.size() + 1 < options.max_total_len) {
      std::vector<TermId> allowed = node.allowed_terms;
      auto excluded = node.excluded_terms;
      for (TermId u : node.allowed_terms) {
        if (std::binary_search(terms.begin(), terms.end(), u)) continue;
        if (out_of_time()) {
          result.complete = false;
          break;
        }
        auto with_u = required;
        with_u.insert(std::upper_bound(with_u.begin(), with_u.end(), u), u);
        if (!fit_and_push(allowed, excluded, std::move(with_u))) {
          result.complete = false;
          break;
        }
        allowed.erase(std::lower_bound(allowed.begin(), allowed.end(), u));
        excluded.insert(std::upper_bound(excluded.begin(), excluded.end(), u), u);
      }
    }
  }

  result.seen_term_sets.assign(seen.begin(), seen.end());
  result.stats.elapsed = Clock::now() - start;
  return result;
}

}  // namespace rashomon
