#pragma once

#include <nlohmann/json.hpp>

#include "rashomon/enumerator.hpp"
#include "rashomon/lawler.hpp"
#include "rashomon/metrics.hpp"
#include "rashomon/optimizer.hpp"
#include "rashomon/rule_list.hpp"
#include "rashomon/vocabulary.hpp"

namespace rashomon {

using Json = nlohmann::ordered_json;

// {"rules":[{"term":name,"label":y},...],"default":y,"risk":r,"objective":o,"length":l}
Json rule_list_to_json(const RuleList& list, const Vocabulary& vocabulary,
                       std::size_t errors, std::size_t n_examples, double lambda);
Json solution_to_json(const Solution& solution, const Vocabulary& vocabulary);

// Reads the "rules" and "default" keys, resolving term names; other keys
// are ignored. Throws UnknownTerm / MalformedInput.
RuleList rule_list_from_json(const Json& json, const Vocabulary& vocabulary);

Json opt_result_to_json(const OptResult& result, const Vocabulary& vocabulary,
                        std::size_t n_examples, double lambda);
Json enum_stats_to_json(const EnumStats& stats);
Json topk_to_json(const TopKResult& result, const Vocabulary& vocabulary);

}  // namespace rashomon
