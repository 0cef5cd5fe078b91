#include "rashomon/serialization.hpp"

#include "rashomon/error.hpp"

namespace rashomon {
namespace {

double to_ms(Seconds s) { return s.count() * 1000.0; }

Json rules_json(const RuleList& list, const Vocabulary& vocabulary) {
  Json rules = Json::array();
  for (const auto& r : list.rules) {
    rules.push_back({{"term", vocabulary.at(r.term_id).name}, {"label", int{r.label}}});
  }
  return rules;
}

}  // namespace

Json rule_list_to_json(const RuleList& list, const Vocabulary& vocabulary,
                       std::size_t errors, std::size_t n_examples, double lambda) {
  const double risk =
      n_examples ? static_cast<double>(errors) / static_cast<double>(n_examples) : 0.0;
  Json j;
  j["rules"] = rules_json(list, vocabulary);
  j["default"] = int{list.default_label};
  j["risk"] = risk;
  j["objective"] = risk + lambda * static_cast<double>(list.length());
  j["length"] = list.length();
  return j;
}

Json solution_to_json(const Solution& solution, const Vocabulary& vocabulary) {
  Json j;
  j["rules"] = rules_json(solution.list, vocabulary);
  j["default"] = int{solution.list.default_label};
  j["risk"] = solution.risk;
  j["objective"] = solution.objective;
  j["length"] = solution.list.length();
  return j;
}

RuleList rule_list_from_json(const Json& json, const Vocabulary& vocabulary) {
  auto label_of = [](const Json& v, const char* what) -> Label {
    if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) {
      throw Error(ErrorCode::kMalformedInput, std::string(what) + " must be 0 or 1");
    }
    return static_cast<Label>(v.get<int>());
  };
  if (!json.is_object() || !json.contains("rules") || !json.contains("default") ||
      !json["rules"].is_array()) {
    throw Error(ErrorCode::kMalformedInput, "rule list needs 'rules' array and 'default'");
  }
  RuleList list;
  for (const auto& r : json["rules"]) {
    if (!r.is_object() || !r.contains("term") || !r["term"].is_string() || !r.contains("label")) {
      throw Error(ErrorCode::kMalformedInput, "rule needs 'term' and 'label'");
    }
    const auto name = r["term"].get<std::string>();
    const auto id = vocabulary.find(name);
    if (!id) throw Error(ErrorCode::kUnknownTerm, "term '" + name + "' not in vocabulary");
    list.rules.push_back(Rule{*id, label_of(r["label"], "rule label")});
  }
  list.default_label = label_of(json["default"], "default");
  return list;
}

Json opt_result_to_json(const OptResult& result, const Vocabulary& vocabulary,
                        std::size_t n_examples, double lambda) {
  Json j = rule_list_to_json(result.best, vocabulary, result.best_errors, n_examples, lambda);
  j["nodes_visited"] = result.nodes_visited;
  j["elapsed_ms"] = to_ms(result.elapsed);
  j["complete"] = result.complete;
  return j;
}

Json enum_stats_to_json(const EnumStats& stats) {
  return Json{{"candidates_visited", stats.candidates_visited},
              {"prefixes_visited", stats.prefixes_visited},
              {"solutions", stats.solutions},
              {"elapsed_ms", to_ms(stats.elapsed)},
              {"peak_queue_depth", stats.peak_queue_depth},
              {"peak_live_bytes", stats.peak_live_bytes},
              {"complete", stats.complete}};
}

Json topk_to_json(const TopKResult& result, const Vocabulary& vocabulary) {
  Json answers = Json::array();
  for (const auto& a : result.answers) {
    Json item;
    item["rules"] = rules_json(a.rule_list, vocabulary);
    item["default"] = int{a.rule_list.default_label};
    item["risk"] = a.risk;
    item["objective"] = a.objective;
    item["length"] = a.rule_list.length();
    item["score"] = a.objective;
    answers.push_back(std::move(item));
  }
  Json j;
  j["answers"] = std::move(answers);
  j["complete"] = result.complete;
  j["stats"] = {{"pops", result.stats.pops},
                {"refits", result.stats.refits},
                {"elapsed_ms", to_ms(result.stats.elapsed)},
                {"peak_seen_sets", result.stats.peak_seen_sets},
                {"seen_set_bytes", result.stats.seen_set_bytes},
                {"peak_queue", result.stats.peak_queue}};
  return j;
}

}  // namespace rashomon
