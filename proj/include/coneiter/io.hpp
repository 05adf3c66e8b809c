#pragma once

// Trace serialization: full JSON (aux values and config snapshot) and
// per-iterate CSV. JSON -> Trace -> CSV reproduces the CSV of the original.

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "coneiter/cone_space.hpp"
#include "coneiter/errors.hpp"
#include "coneiter/iterate.hpp"
#include "coneiter/schedule.hpp"

namespace coneiter {

inline constexpr const char* kSchemaVersion = "1";

namespace detail {

inline nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

inline double number_or(const nlohmann::json& j, double fallback) {
  return j.is_number() ? j.get<double>() : fallback;
}

inline nlohmann::json error_sequence_json(const ErrorSequence& s, int horizon, std::size_t dim) {
  if (s.is_zero()) return nlohmann::json::array();
  nlohmann::json out = nlohmann::json::array();
  const int count = s.rule ? horizon : static_cast<int>(s.table.size());
  for (int n = 1; n <= count; ++n) out.push_back(to_json(s.at(n, dim)));
  return out;
}

inline ErrorSequence error_sequence_from_json(const nlohmann::json& j) {
  ErrorSequence s;
  if (j.is_null()) return s;
  if (!j.is_array()) throw StructuralError("error sequence must be an array of vectors");
  for (const auto& v : j) s.table.push_back(vector_from_json(v));
  return s;
}

}  // namespace detail

inline nlohmann::json to_json(const IterationConfig& cfg, std::size_t dim) {
  const int h = cfg.max_iter;
  nlohmann::json j = {
      {"alpha", cfg.alpha.to_json(h)},
      {"beta", cfg.beta.to_json(h)},
      {"gamma", cfg.gamma.to_json(h)},
      {"lambda", cfg.lambda.to_json(h)},
      {"x0", to_json(cfg.x0)},
      {"x1", to_json(cfg.x1)},
      {"max_iter", cfg.max_iter},
      {"stop", {{"residual_tol", cfg.stop.residual_tol}, {"step_tol", cfg.stop.step_tol}}},
      {"lean", cfg.lean},
      {"errors",
       {{"budget", detail::number_or_null(cfg.errors.budget)},
        {"eps", detail::error_sequence_json(cfg.errors.eps, h, dim)},
        {"rho", detail::error_sequence_json(cfg.errors.rho, h, dim)},
        {"omega", detail::error_sequence_json(cfg.errors.omega, h, dim)},
        {"theta", detail::error_sequence_json(cfg.errors.theta, h, dim)}}}};
  j["inertia_cap"] = cfg.inertia_cap ? nlohmann::json(*cfg.inertia_cap) : nlohmann::json(nullptr);
  j["delta"] = cfg.delta ? nlohmann::json(*cfg.delta) : nlohmann::json(nullptr);
  return j;
}

/// Reads the iteration fields of a config object. Missing fields keep their defaults.
inline IterationConfig iteration_config_from_json(const nlohmann::json& j) {
  IterationConfig cfg;
  if (j.contains("alpha")) cfg.alpha = Schedule::from_json(j["alpha"]);
  if (j.contains("beta")) cfg.beta = Schedule::from_json(j["beta"]);
  if (j.contains("gamma")) cfg.gamma = Schedule::from_json(j["gamma"]);
  if (j.contains("lambda")) cfg.lambda = Schedule::from_json(j["lambda"]);
  if (j.contains("inertia_cap") && !j["inertia_cap"].is_null()) cfg.inertia_cap = j["inertia_cap"].get<double>();
  if (j.contains("delta") && !j["delta"].is_null()) cfg.delta = j["delta"].get<double>();
  if (j.contains("x0")) cfg.x0 = vector_from_json(j["x0"]);
  if (j.contains("x1")) cfg.x1 = vector_from_json(j["x1"]);
  if (j.contains("max_iter")) cfg.max_iter = j["max_iter"].get<int>();
  if (j.contains("stop")) {
    const auto& s = j["stop"];
    cfg.stop.residual_tol = s.value("residual_tol", 0.0);
    cfg.stop.step_tol = s.value("step_tol", 0.0);
  }
  cfg.lean = j.value("lean", false);
  if (j.contains("errors")) {
    const auto& e = j["errors"];
    cfg.errors.budget = detail::number_or(e.value("budget", nlohmann::json(nullptr)),
                                          std::numeric_limits<double>::infinity());
    if (e.contains("eps")) cfg.errors.eps = detail::error_sequence_from_json(e["eps"]);
    if (e.contains("rho")) cfg.errors.rho = detail::error_sequence_from_json(e["rho"]);
    if (e.contains("omega")) cfg.errors.omega = detail::error_sequence_from_json(e["omega"]);
    if (e.contains("theta")) cfg.errors.theta = detail::error_sequence_from_json(e["theta"]);
  }
  return cfg;
}

inline nlohmann::json to_json(const Trace& t) {
  nlohmann::json starts = nlohmann::json::array();
  for (const auto& s : t.starts) starts.push_back(to_json(s));
  nlohmann::json start_res = nlohmann::json::array();
  for (double r : t.start_residuals) start_res.push_back(detail::number_or_null(r));

  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : t.records) {
    nlohmann::json jr = {{"n", r.n},
                         {"x", to_json(r.x)},
                         {"step_delta", detail::number_or_null(r.step_delta)},
                         {"residual", detail::number_or_null(r.residual)}};
    if (r.aux)
      jr["aux"] = {{"y", to_json(r.aux->y)}, {"z", to_json(r.aux->z)}, {"u", to_json(r.aux->u)},
                   {"Tu", to_json(r.aux->Tu)}};
    if (r.c_n) jr["c_n"] = *r.c_n;
    if (r.zeta) jr["zeta"] = *r.zeta;
    if (r.bound_ok) jr["bound_ok"] = *r.bound_ok;
    if (r.gap) jr["gap"] = *r.gap;
    records.push_back(std::move(jr));
  }
  return {{"schema_version", kSchemaVersion},
          {"scheme", t.scheme},
          {"operator", t.operator_name},
          {"space", {{"builtin", t.space.descriptor().builtin}, {"params", t.space.descriptor().params}}},
          {"config", to_json(t.config, t.space.dim())},
          {"starts", starts},
          {"start_residuals", start_res},
          {"records", records},
          {"termination", to_string(t.termination)},
          {"error_sums", t.error_sums},
          {"warnings", t.warnings},
          {"extras", t.extras}};
}

/// Rebuilds a trace from its JSON form. The space must be a builtin.
inline Trace trace_from_json(const nlohmann::json& j) {
  if (j.value("schema_version", std::string()) != kSchemaVersion)
    throw StructuralError("unsupported trace schema_version");
  const auto& js = j.at("space");
  SpaceDescriptor desc{js.at("builtin").get<std::string>(), js.value("params", nlohmann::json::object())};
  Trace t{j.at("scheme").get<std::string>(),
          j.value("operator", std::string()),
          space_from_descriptor(desc),
          iteration_config_from_json(j.at("config")),
          {},
          {},
          {},
          termination_from_string(j.at("termination").get<std::string>()),
          {},
          {},
          j.value("extras", nlohmann::json::object())};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : j.at("starts")) t.starts.push_back(vector_from_json(s));
  for (const auto& r : j.at("start_residuals")) t.start_residuals.push_back(detail::number_or(r, nan));
  for (const auto& jr : j.at("records")) {
    StepRecord r;
    r.n = jr.at("n").get<int>();
    r.x = vector_from_json(jr.at("x"));
    r.step_delta = detail::number_or(jr.at("step_delta"), nan);
    r.residual = detail::number_or(jr.at("residual"), nan);
    if (jr.contains("aux")) {
      const auto& a = jr["aux"];
      r.aux = AuxValues{vector_from_json(a.at("y")), vector_from_json(a.at("z")), vector_from_json(a.at("u")),
                        vector_from_json(a.at("Tu"))};
    }
    if (jr.contains("c_n")) r.c_n = jr["c_n"].get<double>();
    if (jr.contains("zeta")) r.zeta = jr["zeta"].get<double>();
    if (jr.contains("bound_ok")) r.bound_ok = jr["bound_ok"].get<bool>();
    if (jr.contains("gap")) r.gap = jr["gap"].get<double>();
    t.records.push_back(std::move(r));
  }
  if (j.contains("error_sums")) t.error_sums = j["error_sums"].get<std::array<double, 4>>();
  if (j.contains("warnings")) t.warnings = j["warnings"].get<std::vector<std::string>>();
  return t;
}

/// Fixed-point decimal rendering; glibc rounds exact binary ties to even.
inline std::string format_fixed(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

/// One row per iterate x_k. Start rows leave the step and bound columns empty.
inline std::string trace_csv(const Trace& t, int decimals = 4) {
  const std::size_t dim = t.space.dim();
  std::string out = "n";
  for (std::size_t i = 1; i <= dim; ++i) out += ",x_" + std::to_string(i);
  out += ",step_delta,residual,c_n,zeta_n,bound_ok,gap\n";

  auto append_x = [&](const Vector& x) {
    for (double v : x) out += "," + format_fixed(v, decimals);
  };
  for (std::size_t k = 0; k < t.starts.size(); ++k) {
    out += std::to_string(k);
    append_x(t.starts[k]);
    out += ",";
    out += "," + (k < t.start_residuals.size() ? format_fixed(t.start_residuals[k], decimals) : std::string());
    out += ",,,,\n";
  }
  const int off = t.offset();
  for (const auto& r : t.records) {
    out += std::to_string(r.n + off);
    append_x(r.x);
    out += "," + format_fixed(r.step_delta, decimals);
    out += "," + format_fixed(r.residual, decimals);
    out += "," + (r.c_n ? format_fixed(*r.c_n, decimals) : std::string());
    out += "," + (r.zeta ? format_fixed(*r.zeta, decimals) : std::string());
    out += "," + (r.bound_ok ? std::string(*r.bound_ok ? "1" : "0") : std::string());
    out += "," + (r.gap ? format_fixed(*r.gap, decimals) : std::string());
    out += "\n";
  }
  return out;
}

}  // namespace coneiter
