#include "wbmld/report.hpp"

namespace wbmld {

void put_rational(Json& j, const std::string& key, const Rational& q, const JsonOptions& opt) {
  j[key] = q.str();
  if (opt.decimal) j[key + "_decimal"] = q.to_double();
}

Json to_json(const Weight& w) { return Json(w.entries()); }

Json to_json(const DivisorRecord& r, const JsonOptions& opt) {
  Json j;
  put_rational(j, "log_discrepancy", r.log_discrepancy, opt);
  j["k"] = r.k;
  j["factor_orders"] = r.factor_orders;
  j["exceptional_multiplicities"] = r.exceptional_multiplicities;
  j["proper_orders"] = r.proper_orders;
  if (!r.probe_orders.empty()) j["probe_orders"] = r.probe_orders;
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    Json e;
    e["k_contribution"] = s.k_contribution;
    e["factor_orders"] = s.factor_orders;
    e["exceptional_orders"] = s.exceptional_orders;
    if (s.chart >= 0) e["chart"] = "x" + std::to_string(s.chart + 1);
    steps.push_back(e);
  }
  j["steps"] = steps;
  j["trace"] = r.trace;
  return j;
}

Json to_json(const MldResult& r, const JsonOptions& opt) {
  Json j;
  j["value"] = r.value.str();
  if (opt.decimal && !r.value.minus_infinity) j["value_decimal"] = r.value.value.to_double();
  j["certified"] = r.certified;
  j["witness_plan"] = r.witness_plan.str();
  put_rational(j, "witness_discrepancy", r.witness_value, opt);
  j["witness_steps"] = r.witness_plan.steps.size();
  put_rational(j, "one_step_value", r.one_step_value, opt);
  j["one_step_plan"] = r.one_step_plan.str();
  j["skipped_irrational_centers"] = r.skipped_irrational;
  j["notes"] = r.notes;
  j["search_log_size"] = r.search_log.size();
  if (opt.full_log) {
    Json log = Json::array();
    for (const auto& e : r.search_log) {
      Json x;
      x["plan"] = e.plan;
      put_rational(x, "value", e.value, opt);
      x["steps"] = e.length;
      log.push_back(x);
    }
    j["search_log"] = log;
  }
  return j;
}

Json to_json(const GeneralityReport& r, const JsonOptions& opt) {
  Json j;
  j["general"] = r.general;
  Json ws = Json::array();
  for (const auto& w : r.witnesses) {
    Json x;
    x["condition"] = w.condition;
    x["bad_curve"] = w.curve ? Json(w.curve->str()) : Json(nullptr);
    put_rational(x, "ord_B", w.order, opt);
    x["holds"] = w.holds;
    x["reason"] = w.reason;
    ws.push_back(x);
  }
  j["witnesses"] = ws;
  return j;
}

Json to_json(const StandardWeightReport& r, const JsonOptions& opt) {
  Json j;
  j["weight"] = to_json(r.weight);
  Json sys = Json::array();
  for (const auto& p : r.system) sys.push_back(p.str());
  j["system"] = sys;
  j["certified"] = r.certified;
  put_rational(j, "one_step_value", r.one_step_value, opt);
  return j;
}

Json run_report(const Json& command, Json result) {
  Json j;
  j["command"] = command;
  j["engine_version"] = kEngineVersion;
  j["result"] = std::move(result);
  return j;
}

}  // namespace wbmld
