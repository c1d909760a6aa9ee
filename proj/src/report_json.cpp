#include "cfrelay/report_json.hpp"

#include <cmath>

#include "cfrelay/error.hpp"
#include "cfrelay/spec_io.hpp"

namespace cfrelay {

using nlohmann::json;

namespace {

// Non-finite values (an infeasible optimum) serialize as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json subset_list(const std::vector<SubsetMask>& sets) {
  json arr = json::array();
  for (SubsetMask s : sets) arr.push_back(subset_json(s));
  return arr;
}

json subset_values(const std::vector<SubsetValue>& values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back({{"subset", subset_json(v.subset)}, {"value", number(v.value)}});
  return arr;
}

}  // namespace

json subset_json(SubsetMask s) { return s.indices(); }

SubsetMask subset_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, "a relay subset must be an array of indices");
  std::vector<int> idx;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw Error(ErrorCode::Parse, "relay indices must be integers");
    idx.push_back(v.get<int>());
  }
  return SubsetMask::from_indices(idx);
}

json to_json(const DecodabilityReport& r) {
  json classes = json::array();
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    classes.push_back({{"relay", i + 1}, {"class", to_string(r.classes[i])}});
  }
  return {{"d_j", subset_json(r.d_j)},
          {"d_j_prime", subset_json(r.d_j_prime)},
          {"classes", classes},
          {"k_values", subset_values(r.k_values)},
          {"near_ties", subset_values(r.near_ties)}};
}

json to_json(const SchemeReport& r) {
  json j;
  j["scheme"] = to_string(r.scheme);
  j["rate"] = r.rate ? json(*r.rate) : json("infeasible");
  j["raw_value"] = r.rate ? number(r.raw_value) : json(nullptr);
  j["clamped"] = r.clamped;
  j["argmin_subsets"] = subset_list(r.argmin_subsets);
  j["witness_rates"] = r.witness_rates;
  j["relay_subset"] = subset_json(r.relay_subset);
  j["violators"] = subset_list(r.violators);
  json diag = json::array();
  for (const auto& d : r.diagnostics) {
    diag.push_back({{"label", d.label}, {"subset", subset_json(d.subset)}, {"value", number(d.value)}});
  }
  j["diagnostics"] = diag;
  j["notes"] = r.notes;
  if (r.decodability) {
    j["d_j"] = subset_json(r.decodability->d_j);
    j["d_j_prime"] = subset_json(r.decodability->d_j_prime);
    j["decodability"] = to_json(*r.decodability);
  }
  return j;
}

json to_json(const OptimizationResult& r) {
  json restarts = json::array();
  for (const auto& t : r.restarts) {
    json trace = json::array();
    for (double v : t.trace) trace.push_back(number(v));
    restarts.push_back({{"restart", t.restart},
                        {"start_objective", number(t.start_objective)},
                        {"final_objective", number(t.final_objective)},
                        {"evaluations", t.evaluations},
                        {"accepted", t.accepted},
                        {"converged", t.converged},
                        {"trace", trace}});
  }
  json j;
  j["scheme"] = to_string(r.scheme);
  j["best_objective"] = number(r.best_objective);
  j["best_restart"] = r.best_restart;
  j["stochastic_best"] = number(r.stochastic_best);
  j["best_spec"] = spec_to_json(r.best_spec);
  j["restarts"] = restarts;
  if (r.deterministic_best) {
    j["deterministic"] = {{"best_objective", number(*r.deterministic_best)},
                          {"maps", r.deterministic_maps},
                          {"spec", spec_to_json(*r.deterministic_spec)}};
  } else {
    j["deterministic"] = nullptr;
  }
  j["feasibility"] = {{"family", r.feasibility.family},
                      {"satisfied", r.feasibility.satisfied},
                      {"worst_value", number(r.feasibility.worst_value)}};
  return j;
}

json to_json(const SuiteReport& r) {
  json checks = json::object();
  for (const auto& [name, st] : r.checks) {
    checks[name] = {{"evaluated", st.evaluated},
                    {"failures", st.failures},
                    {"ties", st.ties},
                    {"max_residual", number(st.max_residual)}};
  }
  json failures = json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"seed", f.seed},
                        {"instance", f.instance},
                        {"check", f.check},
                        {"subsets", subset_list(f.subsets)},
                        {"residual", number(f.residual)},
                        {"detail", f.detail}});
  }
  return {{"suite", r.suite},
          {"seed", r.seed},
          {"instances", r.instances},
          {"passed", r.passed()},
          {"max_residual", number(r.max_residual())},
          {"checks", checks},
          {"failures", failures},
          {"notes", r.notes}};
}

json to_json(const std::vector<ValidationIssue>& issues) {
  json arr = json::array();
  for (const auto& i : issues) arr.push_back({{"field", i.field}, {"message", i.message}});
  return arr;
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

}  // namespace cfrelay
