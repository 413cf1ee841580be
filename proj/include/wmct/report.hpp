#ifndef WMCT_REPORT_HPP_
#define WMCT_REPORT_HPP_

#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "difftest.hpp"
#include "outcomes.hpp"
#include "render.hpp"
#include "testgen.hpp"

namespace wmct {

/// One state per line (`P1:r0=0; y=2;`), then `Ok` when some state satisfies
/// the condition and `No` otherwise. Satisfying states are marked `:>`.
inline std::string format_outcome_table(const OutcomeSet& s, const FinalCondition& f) {
  std::ostringstream os;
  os << "Test " << s.test << " Model " << s.model << "\n";
  os << "Condition " << render_exists(f) << "\n";
  os << "States " << s.size() << "\n";
  bool any = false;
  for (const auto& o : s.outcomes) {
    const bool sat = f.eval(o);
    any = any || sat;
    std::string row = sat ? ":>" : "";
    for (const auto& [obs, v] : o) row += obs.str() + "=" + std::to_string(v) + "; ";
    if (!o.empty()) row.pop_back();
    os << row << "\n";
  }
  os << (any ? "Ok" : "No") << "\n";
  return os.str();
}

inline nlohmann::json outcome_to_json(const Outcome& o) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [obs, v] : o) j[obs.str()] = v;
  return j;
}

inline nlohmann::json outcome_set_to_json(const OutcomeSet& s) {
  nlohmann::json j;
  j["test"] = s.test;
  j["model"] = s.model;
  j["outcomes"] = nlohmann::json::array();
  for (const auto& o : s.outcomes) j["outcomes"].push_back(outcome_to_json(o));
  return j;
}

/// Inverse of outcome_set_to_json.
inline OutcomeSet outcome_set_from_json(const nlohmann::json& j) {
  OutcomeSet s;
  s.test = j.at("test").get<std::string>();
  s.model = j.at("model").get<std::string>();
  std::set<Observable> obs;
  for (const auto& row : j.at("outcomes")) {
    Outcome o;
    for (const auto& [k, v] : row.items()) {
      auto ob = parse_observable(k);
      if (!ob) throw Error("malformed observable '" + k + "'");
      obs.insert(*ob);
      o[*ob] = v.get<int>();
    }
    s.outcomes.insert(std::move(o));
  }
  s.observables.assign(obs.begin(), obs.end());
  return s;
}

inline nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json j;
  j["status"] = std::string(status_name(v.status));
  j["witnesses"] = nlohmann::json::array();
  for (const auto& w : v.witnesses) j["witnesses"].push_back(outcome_to_json(w));
  j["source_outcomes"] = v.source_outcomes.size();
  j["compiled_outcomes"] = v.compiled_outcomes.size();
  if (v.status == VerdictStatus::kError) j["diagnostic"] = v.diagnostic;
  return j;
}

inline std::string format_verdict(const Verdict& v, const FinalCondition& source_final) {
  std::ostringstream os;
  if (v.status != VerdictStatus::kError) {
    os << format_outcome_table(v.source_outcomes, source_final);
    os << format_outcome_table(v.compiled_outcomes, source_final);
  }
  for (const auto& w : v.witnesses) os << "Witness " << outcome_str(w) << "\n";
  os << "Verdict ";
  switch (v.status) {
    case VerdictStatus::kPass: os << "Pass"; break;
    case VerdictStatus::kBug: os << "Bug"; break;
    case VerdictStatus::kError: os << "Error: " << v.diagnostic; break;
  }
  os << "\n";
  return os.str();
}

inline nlohmann::json tag_to_json(const VariantTag& t) {
  nlohmann::json j;
  j["variant"] = std::string(variant_name(t.variant));
  j["flag_access"] = t.flag_access == FlagAccess::kExchange ? "exchange" : "load";
  j["data_store"] = std::string(short_name(t.data_store));
  j["flag_store"] = std::string(short_name(t.flag_store));
  j["flag_op"] = std::string(short_name(t.flag_op));
  j["fence"] = t.fence ? nlohmann::json(std::string(short_name(*t.fence))) : nlohmann::json(nullptr);
  j["data_load"] = std::string(short_name(t.data_load));
  return j;
}

}  // namespace wmct

#endif  // WMCT_REPORT_HPP_
