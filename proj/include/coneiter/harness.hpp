#pragma once

// Experiment runner: JSON-configured scheme comparisons, the built-in example
// registry (ex1..ex4), discrepancy reports against reference tables, and the
// command implementations behind the `coneiter` CLI.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "coneiter/analysis.hpp"
#include "coneiter/cone_space.hpp"
#include "coneiter/errors.hpp"
#include "coneiter/io.hpp"
#include "coneiter/iterate.hpp"
#include "coneiter/operators.hpp"
#include "coneiter/svg.hpp"

namespace coneiter {

/// Published |x_n| tables the examples are compared against.
namespace reference {

// Saturating map, alpha = beta = gamma = 0.2, lambda = 0.6, x0 = 1, x1 = 0.5; n = 0..10.
inline const std::vector<double> kSaturatingMultiInertial = {1.0000, 0.5000, 0.3657, 0.3131, 0.2815, 0.2574,
                                                             0.2373, 0.2202, 0.2053, 0.1920, 0.1800};
// T(x) = 0.8x, listed with lambda = 0.9 and inertia 0.2; n = 0..10.
inline const std::vector<double> kLinearListing = {1.0000, 0.5000, 0.4000, 0.3200, 0.2560, 0.2048,
                                                   0.1638, 0.1311, 0.1049, 0.0839, 0.0671};
// Three-scheme comparison on the saturating map; n = 0..6.
inline const std::vector<double> kComparisonKM = {1.0000, 0.7500, 0.5893, 0.4800, 0.4022, 0.3445, 0.3004};
inline const std::vector<double> kComparisonTwoStep = {1.0000, 0.5000, 0.3314, 0.2567, 0.2135, 0.1840, 0.1619};
inline const std::vector<double> kComparisonMultiInertial = {1.0000, 0.5000, 0.3657, 0.3131,
                                                             0.2815, 0.2574, 0.2373};

inline constexpr double kTableTolerance = 5e-5;

}  // namespace reference

// ---------------------------------------------------------------------------
// Configuration

struct SchemeBlock {
  std::string label;
  std::string scheme;  // multi_inertial | km | inertial_km | coincidence
  IterationConfig config;
};

struct AnalysisOptions {
  std::vector<BoundMode> modes;
  bool certify = false;
  std::optional<double> c_star;
};

struct OutputOptions {
  bool csv = true;
  bool json = true;
  bool svg = false;
  int decimals = 4;
  std::size_t table_rows = 0;  // rows printed in the summary; 0 = all
};

struct ExperimentConfig {
  std::string name;
  nlohmann::json space = {{"builtin", "scalar_p"}, {"p", 1.0}};
  nlohmann::json op = nlohmann::json::object();    // {"builtin": ..., ...}
  nlohmann::json pair = nlohmann::json();          // {"S": spec, "T": spec, "consts": {...}}
  std::optional<Vector> reference;
  std::vector<SchemeBlock> schemes;
  AnalysisOptions analysis;
  OutputOptions output;
};

inline ConeBpSpace build_space(const nlohmann::json& j) {
  if (j.is_string()) return parse_space_spec(j.get<std::string>());
  SpaceDescriptor d;
  d.builtin = j.at("builtin").get<std::string>();
  d.params = j;
  d.params.erase("builtin");
  return space_from_descriptor(d);
}

inline OperatorSpec build_operator(const nlohmann::json& j, const ConeBpSpace& space) {
  if (j.is_string()) return parse_operator_spec(j.get<std::string>(), space);
  const std::string name = j.at("builtin").get<std::string>();
  OperatorSpec op = name == "linear" ? builtin_linear(j.at("q").get<double>(), space)
                                     : parse_operator_spec(name, space);
  if (j.contains("weak_consts")) {
    const auto& k = j["weak_consts"];
    op.weak_consts = WeakContractionConsts{k.value("a", 0.0), k.value("b_w", 0.0), k.value("c_w", 0.0),
                                           k.value("s", 0.0)};
    op.declared_class = OperatorClass::WeakContraction;
  }
  return op;
}

inline CompatiblePairSpec build_pair(const nlohmann::json& j, const ConeBpSpace& space) {
  std::optional<CompatConsts> consts;
  if (j.contains("consts")) {
    const auto& c = j["consts"];
    consts = CompatConsts{c.value("a", 1.0), c.value("b_w", 0.0), c.value("r", 0.0)};
  }
  auto pair = make_builtin_pair(parse_operator_spec(j.at("S").get<std::string>(), space),
                                parse_operator_spec(j.at("T").get<std::string>(), space), consts);
  pair.weakly_compatible = j.value("weakly_compatible", true);
  return pair;
}

/// Parses and validates an experiment config (schema_version "1").
inline ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw StructuralError("experiment config must be a JSON object");
  if (j.contains("schema_version") && j["schema_version"] != kSchemaVersion)
    throw StructuralError("unsupported config schema_version");
  ExperimentConfig cfg;
  cfg.name = j.value("name", std::string("experiment"));
  if (j.contains("space")) cfg.space = j["space"];
  if (j.contains("operator")) cfg.op = j["operator"];
  if (j.contains("pair")) cfg.pair = j["pair"];
  if (j.contains("reference")) cfg.reference = vector_from_json(j["reference"]);

  const auto space = build_space(cfg.space);
  if (cfg.op.empty() && cfg.pair.is_null()) throw StructuralError("config needs an 'operator' or a 'pair'");
  if (!cfg.op.empty()) (void)build_operator(cfg.op, space);
  if (!cfg.pair.is_null()) (void)build_pair(cfg.pair, space);

  if (!j.contains("schemes") || !j["schemes"].is_array() || j["schemes"].empty())
    throw StructuralError("config needs at least one scheme block");
  for (const auto& js : j["schemes"]) {
    SchemeBlock b;
    b.scheme = js.at("scheme").get<std::string>();
    if (b.scheme != "multi_inertial" && b.scheme != "km" && b.scheme != "inertial_km" && b.scheme != "coincidence")
      throw StructuralError("unknown scheme '" + b.scheme + "'");
    if (b.scheme == "coincidence" && cfg.pair.is_null()) throw StructuralError("coincidence scheme needs a 'pair'");
    if (b.scheme != "coincidence" && cfg.op.empty())
      throw StructuralError("scheme '" + b.scheme + "' needs an 'operator'");
    b.label = js.value("label", b.scheme);
    b.config = iteration_config_from_json(js);
    for (const auto& other : cfg.schemes)
      if (other.label == b.label) throw StructuralError("duplicate scheme label '" + b.label + "'");
    cfg.schemes.push_back(std::move(b));
  }
  if (j.contains("analysis")) {
    const auto& a = j["analysis"];
    for (const auto& m : a.value("bound_modes", nlohmann::json::array()))
      cfg.analysis.modes.push_back(bound_mode_from_string(m.get<std::string>()));
    cfg.analysis.certify = a.value("certify", false);
    if (a.contains("c_star") && !a["c_star"].is_null()) cfg.analysis.c_star = a["c_star"].get<double>();
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    cfg.output.csv = o.value("csv", true);
    cfg.output.json = o.value("json", true);
    cfg.output.svg = o.value("svg", false);
    cfg.output.decimals = o.value("decimals", 4);
    cfg.output.table_rows = o.value("table_rows", std::size_t{0});
    if (cfg.output.decimals < 0 || cfg.output.decimals > 17) throw StructuralError("decimals must be in [0, 17]");
  }
  return cfg;
}

inline ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("config parse error: ") + e.what());
  }
  return experiment_from_json(j);
}

// ---------------------------------------------------------------------------
// Results

/// Columns of scalarized distances to a reference point over a shared n-range.
struct ComparisonTable {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> columns;

  [[nodiscard]] std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }

  [[nodiscard]] const std::vector<double>& column(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return columns[i];
    throw StructuralError("no column '" + label + "'");
  }

  [[nodiscard]] std::string format(int decimals = 4, std::size_t max_rows = 0) const {
    std::ostringstream os;
    os << "n";
    for (const auto& l : labels) os << "\t" << l;
    os << "\n";
    const std::size_t r = max_rows == 0 ? rows() : std::min(rows(), max_rows);
    for (std::size_t i = 0; i < r; ++i) {
      os << i;
      for (const auto& c : columns) os << "\t" << format_fixed(c[i], decimals);
      os << "\n";
    }
    return os.str();
  }
};

inline nlohmann::json to_json(const ComparisonTable& t) {
  nlohmann::json cols = nlohmann::json::object();
  for (std::size_t i = 0; i < t.labels.size(); ++i) cols[t.labels[i]] = t.columns[i];
  return {{"rows", t.rows()}, {"columns", cols}};
}

inline ComparisonTable make_table(const std::vector<std::pair<std::string, const Trace*>>& traces,
                                  const Vector& reference) {
  ComparisonTable t;
  std::size_t rows = std::numeric_limits<std::size_t>::max();
  for (const auto& [label, trace] : traces) rows = std::min(rows, trace->iterate_count());
  for (const auto& [label, trace] : traces) {
    auto d = trace->distances_to(reference);
    d.resize(rows);
    t.labels.push_back(label);
    t.columns.push_back(std::move(d));
  }
  return t;
}

struct CandidateMatch {
  std::string label;
  double max_abs_dev = 0.0;
  int first_mismatch = -1;  // first n beyond tolerance, -1 when none
  bool reproduces = false;
};

/// Which runs reproduce a reference table to within the tolerance.
struct DiscrepancyReport {
  std::string reference_label;
  std::vector<double> reference_values;
  double tolerance = reference::kTableTolerance;
  std::vector<CandidateMatch> candidates;
  std::vector<std::string> notes;

  [[nodiscard]] const CandidateMatch& candidate(const std::string& label) const {
    for (const auto& c : candidates)
      if (c.label == label) return c;
    throw StructuralError("no candidate '" + label + "'");
  }
};

inline DiscrepancyReport discrepancy(std::string label, std::vector<double> values) {
  return {std::move(label), std::move(values), reference::kTableTolerance, {}, {}};
}

inline nlohmann::json to_json(const DiscrepancyReport& r) {
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : r.candidates)
    cands.push_back({{"label", c.label},
                     {"max_abs_dev", c.max_abs_dev},
                     {"first_mismatch_n", c.first_mismatch},
                     {"reproduces", c.reproduces}});
  return {{"reference", r.reference_label},
          {"values", r.reference_values},
          {"tolerance", r.tolerance},
          {"candidates", cands},
          {"notes", r.notes}};
}

inline CandidateMatch compare_to_reference(const std::string& label, const std::vector<double>& values,
                                           const std::vector<double>& ref, double tol = reference::kTableTolerance) {
  CandidateMatch m{label};
  const std::size_t n = std::min(values.size(), ref.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = std::abs(values[i] - ref[i]);
    m.max_abs_dev = std::max(m.max_abs_dev, dev);
    if (dev > tol && m.first_mismatch < 0) m.first_mismatch = static_cast<int>(i);
  }
  m.reproduces = n == ref.size() && m.first_mismatch < 0;
  return m;
}

struct SchemeRun {
  std::string label;
  Trace trace;
  std::vector<std::pair<BoundMode, std::vector<StepBound>>> bounds;
  std::optional<ConvergenceCertificate> certificate;
  std::optional<std::string> divergence;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitPrecondition = 2,
  kExitDivergence = 3,
  kExitViolations = 4,
};

struct ExperimentResult {
  std::string name;
  int status = kExitOk;
  std::vector<ValidationReport> validations;
  std::vector<SchemeRun> runs;
  std::optional<ComparisonTable> table;
  std::vector<DiscrepancyReport> discrepancies;
  std::vector<ProbeReport> probes;
  std::vector<std::string> messages;
  int decimals = 4;
  std::size_t table_rows = 0;

  [[nodiscard]] const SchemeRun& run(const std::string& label) const {
    for (const auto& r : runs)
      if (r.label == label) return r;
    throw StructuralError("no run '" + label + "'");
  }
};

// ---------------------------------------------------------------------------
// Running

/// Validates theorem preconditions, runs every scheme block, then analyses traces.
/// With force = false a failing precondition stops before any run (status 2).
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, bool force = false) {
  ExperimentResult res;
  res.name = cfg.name;
  res.decimals = cfg.output.decimals;
  res.table_rows = cfg.output.table_rows;
  const auto space = build_space(cfg.space);
  std::optional<OperatorSpec> op;
  std::optional<CompatiblePairSpec> pair;
  if (!cfg.op.empty()) op = build_operator(cfg.op, space);
  if (!cfg.pair.is_null()) pair = build_pair(cfg.pair, space);

  for (const auto& b : cfg.schemes) {
    if (b.scheme == "multi_inertial") {
      auto rep = theorem1_preconditions(space, b.config);
      rep.theorem += ":" + b.label;
      res.validations.push_back(std::move(rep));
      if (op && op->weak_consts) {
        auto rep2 = theorem2_preconditions(*op->weak_consts, b.config);
        rep2.theorem += ":" + b.label;
        res.validations.push_back(std::move(rep2));
      }
    } else if (b.scheme == "coincidence") {
      auto rep = theorem3_preconditions(*pair);
      rep.theorem += ":" + b.label;
      res.validations.push_back(std::move(rep));
    }
  }
  for (const auto& v : res.validations) {
    if (!v.passed()) {
      for (const auto& name : v.failing())
        res.messages.push_back("precondition failed: " + v.theorem + " / " + name);
      if (!force) res.status = kExitPrecondition;
    }
  }
  if (res.status == kExitPrecondition) return res;

  for (const auto& b : cfg.schemes) {
    try {
      Trace t = b.scheme == "multi_inertial" ? run_multi_inertial(space, *op, b.config)
                : b.scheme == "km"          ? run_km(space, *op, b.config)
                : b.scheme == "inertial_km" ? run_inertial_km(space, *op, b.config)
                                            : run_coincidence(*pair, b.config.x0, b.config.max_iter, b.config.stop);
      res.runs.push_back(SchemeRun{b.label, std::move(t), {}, {}, {}});
    } catch (const DivergenceError& e) {
      res.runs.push_back(SchemeRun{b.label, e.trace(), {}, {}, e.what()});
      res.messages.push_back("divergence in " + b.label + ": " + e.what());
      res.status = kExitDivergence;
    }
  }

  for (auto& r : res.runs) {
    if (r.trace.scheme != "coincidence" && r.trace.iterate_count() >= 3) {
      for (const auto mode : cfg.analysis.modes) {
        if (mode == BoundMode::ResidualCorrected && r.trace.config.lean) {
          res.messages.push_back(r.label + ": residual_corrected skipped on a lean trace");
          continue;
        }
        r.bounds.emplace_back(mode, check_step_bound(r.trace, mode));
      }
      if (!r.bounds.empty()) annotate(r.trace, r.bounds.front().second);
    }
    if (cfg.analysis.certify && !r.divergence) {
      CertificateOptions opts;
      opts.c_star = cfg.analysis.c_star;
      r.certificate = cauchy_certificate(r.trace, opts);
    }
  }

  std::vector<std::pair<std::string, const Trace*>> cols;
  for (const auto& r : res.runs) cols.emplace_back(r.label, &r.trace);
  if (!cols.empty()) res.table = make_table(cols, cfg.reference.value_or(Vector::zero(space.dim())));
  return res;
}

inline nlohmann::json to_json(const ExperimentResult& res) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : res.runs) {
    nlohmann::json jr = {{"label", r.label}, {"trace", to_json(r.trace)}};
    nlohmann::json bounds = nlohmann::json::object();
    for (const auto& [mode, b] : r.bounds) bounds[to_string(mode)] = to_json(b);
    jr["bounds"] = bounds;
    if (r.certificate) jr["certificate"] = to_json(*r.certificate);
    if (r.divergence) jr["divergence"] = *r.divergence;
    runs.push_back(std::move(jr));
  }
  nlohmann::json vals = nlohmann::json::array();
  for (const auto& v : res.validations) vals.push_back(to_json(v));
  nlohmann::json discs = nlohmann::json::array();
  for (const auto& d : res.discrepancies) discs.push_back(to_json(d));
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& p : res.probes) probes.push_back(to_json(p));
  nlohmann::json j = {{"schema_version", kSchemaVersion},
                      {"name", res.name},
                      {"status", res.status},
                      {"validations", vals},
                      {"runs", runs},
                      {"discrepancies", discs},
                      {"probes", probes},
                      {"messages", res.messages}};
  if (res.table) j["table"] = to_json(*res.table);
  return j;
}

/// Writes <name>.<label>.csv per run, <name>.json and <name>.svg as requested.
inline void write_outputs(const ExperimentResult& res, const std::filesystem::path& out_dir, const OutputOptions& opts) {
  std::filesystem::create_directories(out_dir);
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw StructuralError("cannot write '" + p.string() + "'");
    f << text;
  };
  if (opts.csv)
    for (const auto& r : res.runs) write(out_dir / (res.name + "." + r.label + ".csv"), trace_csv(r.trace, opts.decimals));
  if (opts.json) write(out_dir / (res.name + ".json"), to_json(res).dump(2) + "\n");
  if (opts.svg && res.table) {
    std::vector<svg::Series> series;
    for (std::size_t i = 0; i < res.table->labels.size(); ++i)
      series.push_back({res.table->labels[i], res.table->columns[i]});
    write(out_dir / (res.name + ".svg"), svg::line_chart(series, res.name));
  }
}

inline void print_summary(const ExperimentResult& res, std::ostream& os) {
  os << "experiment " << res.name << " (status " << res.status << ")\n";
  for (const auto& v : res.validations)
    os << "  check " << v.theorem << ": " << (v.passed() ? "pass" : "FAIL") << "\n";
  for (const auto& r : res.runs) {
    os << "  run " << r.label << ": " << r.trace.records.size() << " steps, stop=" << to_string(r.trace.termination);
    if (r.certificate) os << ", cauchy=" << r.certificate->verdict();
    for (const auto& [mode, b] : r.bounds) {
      const auto bad = std::count_if(b.begin(), b.end(), [](const auto& s) { return !s.satisfied; });
      os << ", " << to_string(mode) << " violations=" << bad;
    }
    os << "\n";
  }
  if (res.table) os << res.table->format(res.decimals, res.table_rows);
  for (const auto& d : res.discrepancies) {
    os << "discrepancy vs " << d.reference_label << ":\n";
    for (const auto& c : d.candidates)
      os << "  " << c.label << ": " << (c.reproduces ? "reproduces" : "does not reproduce")
         << " (max |dev| = " << format_fixed(c.max_abs_dev, 6) << ")\n";
    for (const auto& n : d.notes) os << "  note: " << n << "\n";
  }
  for (const auto& p : res.probes)
    os << "probe " << p.condition << ": " << p.violation_count << " violations in " << p.samples << " samples\n";
  for (const auto& m : res.messages) os << m << "\n";
}

// ---------------------------------------------------------------------------
// Built-in examples

namespace detail {

inline SchemeBlock scheme_block(std::string label, std::string scheme, double alpha, double lambda, Vector x0,
                                Vector x1, int max_iter) {
  SchemeBlock b{std::move(label), std::move(scheme), {}};
  b.config.alpha = b.config.beta = b.config.gamma = Schedule::constant(alpha);
  b.config.lambda = Schedule::constant(lambda);
  b.config.x0 = std::move(x0);
  b.config.x1 = std::move(x1);
  b.config.max_iter = max_iter;
  return b;
}

}  // namespace detail

inline const std::vector<std::string>& example_ids() {
  static const std::vector<std::string> ids = {"ex1", "ex2", "ex3", "ex4"};
  return ids;
}

/// Config of a registry entry, before any report post-processing.
inline ExperimentConfig example_config(const std::string& id) {
  ExperimentConfig cfg;
  cfg.name = id;
  cfg.output.table_rows = 11;
  if (id == "ex1") {
    cfg.op = {{"builtin", "saturating"}};
    cfg.schemes.push_back(detail::scheme_block("multi_inertial", "multi_inertial", 0.2, 0.6, {1.0}, {0.5}, 499));
    cfg.analysis.modes = {BoundMode::ResidualCorrected, BoundMode::PaperLiteral, BoundMode::PCorrected};
    return cfg;
  }
  if (id == "ex2") {
    cfg.op = {{"builtin", "linear"}, {"q", 0.8}};
    cfg.schemes.push_back(detail::scheme_block("multi_inertial", "multi_inertial", 0.2, 0.9, {1.0}, {0.5}, 300));
    // x_{n+1} = T(x_n) from x_1: inertial KM with alpha = 0 and lambda = 1.
    cfg.schemes.push_back(detail::scheme_block("pure_map", "inertial_km", 0.0, 1.0, {1.0}, {0.5}, 300));
    cfg.analysis.modes = {BoundMode::ResidualCorrected, BoundMode::PaperLiteral};
    cfg.analysis.certify = true;
    return cfg;
  }
  if (id == "ex3") {
    cfg.space = {{"builtin", "r2_matrix"}, {"A", {{2.0, 0.0}, {0.0, 1.0}}}};
    cfg.pair = {{"S", "identity"}, {"T", "linear:0.8"}, {"consts", {{"a", 1.0}, {"b_w", 0.0}, {"r", 0.8}}},
                {"weakly_compatible", true}};
    SchemeBlock b{"coincidence", "coincidence", {}};
    b.config.x0 = Vector{1.0, 1.0};
    b.config.max_iter = 200;
    cfg.schemes.push_back(std::move(b));
    cfg.analysis.certify = true;
    return cfg;
  }
  if (id == "ex4") {
    cfg.op = {{"builtin", "saturating"}};
    cfg.schemes.push_back(detail::scheme_block("km_lambda_0.5", "km", 0.0, 0.5, {1.0}, {}, 6));
    cfg.schemes.push_back(detail::scheme_block("km_lambda_0.6", "km", 0.0, 0.6, {1.0}, {}, 6));
    cfg.schemes.push_back(detail::scheme_block("inertial_km", "inertial_km", 0.2, 0.6, {1.0}, {0.5}, 5));
    cfg.schemes.push_back(detail::scheme_block("multi_inertial", "multi_inertial", 0.2, 0.6, {1.0}, {0.5}, 5));
    cfg.analysis.modes = {BoundMode::ResidualCorrected};
    return cfg;
  }
  throw StructuralError("unknown example '" + id + "'");
}

/// Runs a registry entry and attaches its discrepancy reports and probes.
inline ExperimentResult run_example(const std::string& id) {
  const auto cfg = example_config(id);
  auto res = run_experiment(cfg);
  if (res.status != kExitOk) return res;
  const auto& table = *res.table;

  if (id == "ex1") {
    auto d = discrepancy("saturating multi-inertial listing (n = 0..10)", reference::kSaturatingMultiInertial);
    const auto& col = table.column("multi_inertial");
    d.candidates.push_back(compare_to_reference("multi_inertial", col, d.reference_values));
    const auto& m = d.candidates.back();
    if (!m.reproduces)
      d.notes.push_back("n = 0.." + std::to_string(m.first_mismatch - 1) + " agree within " +
                        format_fixed(d.tolerance, 5) + "; from n = " + std::to_string(m.first_mismatch) +
                        " the listed values depart from the stated recursion (max |dev| = " +
                        format_fixed(m.max_abs_dev, 6) + ", recursion gives x_9 = " + format_fixed(col.at(9), 4) +
                        ", x_10 = " + format_fixed(col.at(10), 4) + ")");
    res.discrepancies.push_back(std::move(d));
  } else if (id == "ex2") {
    auto d = discrepancy("linear q = 0.8 listing (n = 0..10)", reference::kLinearListing);
    for (const char* label : {"multi_inertial", "pure_map"})
      d.candidates.push_back(compare_to_reference(label, table.column(label), d.reference_values));
    const double x2 = table.column("multi_inertial").at(2);
    d.notes.push_back("the listed values equal the pure map x_{n+1} = 0.8 x_n applied from x_1; the stated "
                      "multi-inertial scheme gives x_2 = " + format_fixed(x2, 4) + " instead of 0.4000");
    res.discrepancies.push_back(std::move(d));
  } else if (id == "ex3") {
    const auto space = build_space(cfg.space);
    auto same_map_pair = parse_pair_spec("S=T=linear:0.8", space);
    res.probes.push_back(probe_compat(same_map_pair, 1000, 7));
    res.messages.push_back("S = T = linear(0.8) variant: " + std::to_string(res.probes.back().violation_count) +
                           " compatibility inequality violations (S = identity is the working pair)");
  } else if (id == "ex4") {
    auto km = discrepancy("comparison table, KM row", reference::kComparisonKM);
    km.candidates.push_back(compare_to_reference("km_lambda_0.5", table.column("km_lambda_0.5"), km.reference_values));
    km.candidates.push_back(compare_to_reference("km_lambda_0.6", table.column("km_lambda_0.6"), km.reference_values));
    km.notes.push_back("the KM row is reproduced with lambda = 0.5, while the accompanying text states lambda = 0.6");
    res.discrepancies.push_back(std::move(km));
    auto two = discrepancy("comparison table, two-step row", reference::kComparisonTwoStep);
    two.candidates.push_back(compare_to_reference("inertial_km", table.column("inertial_km"), two.reference_values));
    res.discrepancies.push_back(std::move(two));
    auto mi = discrepancy("comparison table, multi-inertial row", reference::kComparisonMultiInertial);
    mi.candidates.push_back(
        compare_to_reference("multi_inertial", table.column("multi_inertial"), mi.reference_values));
    res.discrepancies.push_back(std::move(mi));
  }
  return res;
}

// ---------------------------------------------------------------------------
// CLI commands

struct RunFlags {
  bool svg = false;
  bool force = false;
};

inline int cli_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, RunFlags flags,
                   std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_experiment(config_path);
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (flags.svg) cfg.output.svg = true;
  ExperimentResult res;
  try {
    res = run_experiment(cfg, flags.force);
  } catch (const ConfigurationError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (res.status == kExitPrecondition) {
    for (const auto& m : res.messages) err << m << "\n";
    return res.status;
  }
  write_outputs(res, out_dir, cfg.output);
  print_summary(res, out);
  return res.status;
}

inline int cli_example(const std::string& id, const std::filesystem::path& out_dir, bool svg, std::ostream& out,
                       std::ostream& err) {
  if (std::find(example_ids().begin(), example_ids().end(), id) == example_ids().end()) {
    err << "unknown example '" << id << "' (expected ex1, ex2, ex3 or ex4)\n";
    return kExitConfig;
  }
  auto cfg = example_config(id);
  cfg.output.svg = cfg.output.svg || svg;
  const auto res = run_example(id);
  write_outputs(res, out_dir, cfg.output);
  print_summary(res, out);
  return res.status;
}

struct CheckRequest {
  std::optional<std::string> space;
  std::optional<std::string> op;
  std::optional<std::string> pair;
  std::optional<std::string> op_class;  // qne | wc
  std::optional<std::vector<double>> consts;
  int samples = 1000;
  std::uint64_t seed = 0;
};

inline int cli_check(const CheckRequest& req, std::ostream& out, std::ostream& err) {
  try {
    const auto space = parse_space_spec(req.space.value_or("scalar_p:1"));
    if (req.pair) {
      std::optional<CompatConsts> consts;
      if (req.consts) {
        if (req.consts->size() != 3) throw StructuralError("pair constants are a,b_w,r");
        consts = CompatConsts{(*req.consts)[0], (*req.consts)[1], (*req.consts)[2]};
      }
      const auto rep = probe_compat(parse_pair_spec(*req.pair, space, consts), req.samples, req.seed);
      out << to_json(rep).dump(2) << "\n";
      return rep.passed() ? kExitOk : kExitViolations;
    }
    if (req.op) {
      const auto op = parse_operator_spec(*req.op, space);
      std::string cls = req.op_class.value_or(op.declared_class == OperatorClass::WeakContraction ? "wc"
                                              : op.declared_class == OperatorClass::QuasiNonexpansive
                                                  ? "qne"
                                                  : "");
      ProbeReport rep;
      if (cls == "qne") {
        if (!op.witness) throw StructuralError("operator has no known fixed point witness");
        rep = probe_quasi_nonexpansive(op, *op.witness, req.samples, req.seed);
      } else if (cls == "wc") {
        WeakContractionConsts k;
        if (req.consts) {
          if (req.consts->size() != 4) throw StructuralError("weak contraction constants are a,b_w,c_w,s");
          k = {(*req.consts)[0], (*req.consts)[1], (*req.consts)[2], (*req.consts)[3]};
        } else if (op.weak_consts) {
          k = *op.weak_consts;
        } else {
          throw StructuralError("no weak contraction constants for '" + *req.op + "'; pass --consts");
        }
        rep = probe_weak_contraction(op, k, req.samples, req.seed);
      } else {
        throw StructuralError("unknown or missing operator class; use --class qne|wc");
      }
      out << to_json(rep).dump(2) << "\n";
      return rep.passed() ? kExitOk : kExitViolations;
    }
    if (req.space) {
      const auto rep = check_axioms(space, req.samples, req.seed);
      out << to_json(rep).dump(2) << "\n";
      return rep.passed() ? kExitOk : kExitViolations;
    }
    throw StructuralError("check needs --space, --op or --pair");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace coneiter
