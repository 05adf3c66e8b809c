// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coneiter/coneiter.hpp"
#include "oracle.hpp"

using namespace coneiter;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

bool within(const std::vector<double>& got, const std::vector<double>& want, double tol, std::size_t from = 0) {
  if (got.size() < want.size()) return false;
  for (std::size_t i = from; i < want.size(); ++i)
    if (std::abs(got[i] - want[i]) > tol) return false;
  return true;
}

Outcome golden_ex1() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto res = run_example("ex1");
  const double dt = seconds_since(t0);
  o.require(res.status == kExitOk, "status");
  if (!o.ok) return o;
  // The listing is reproduced through n = 6; its tail n = 7..10 departs from the stated
  // recursion by up to 3e-4, so there the run is held to an independent recomputation
  // and the report must name the departure.
  const auto& col = res.table->column("multi_inertial");
  const std::vector<double> head(reference::kSaturatingMultiInertial.begin(),
                                 reference::kSaturatingMultiInertial.begin() + 7);
  o.require(within(col, head, 5e-5), "n = 0..6 vs listing");
  const auto xs = oracle::multi_inertial(oracle::saturating, 0.2, 0.2, 0.2, 0.6, 1.0, 0.5, 9);
  o.require(within(col, xs, 5e-5), "n = 0..10 vs recomputation");
  const auto& d = res.discrepancies.at(0);
  o.require(d.candidate("multi_inertial").first_mismatch == 7 && !d.notes.empty(), "tail departure not reported");
  o.require(dt < 1.0, "runtime " + std::to_string(dt) + " s");
  return o;
}

Outcome golden_ex4() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto res = run_example("ex4");
  const double dt = seconds_since(t0);
  o.require(res.status == kExitOk, "status");
  if (!o.ok) return o;
  const auto& t = *res.table;
  o.require(within(t.column("km_lambda_0.5"), reference::kComparisonKM, 5e-5), "KM row");
  o.require(within(t.column("inertial_km"), reference::kComparisonTwoStep, 5e-5), "inertial KM row");
  o.require(within(t.column("multi_inertial"), reference::kComparisonMultiInertial, 5e-5), "multi-inertial row");
  bool named = false;
  for (const auto& d : res.discrepancies)
    for (const auto& n : d.notes)
      if (n.find("lambda = 0.5") != std::string::npos && n.find("lambda = 0.6") != std::string::npos) named = true;
  o.require(named, "lambda discrepancy not reported");
  o.require(dt < 1.0, "runtime " + std::to_string(dt) + " s");
  return o;
}

Outcome dual_ex2() {
  Outcome o;
  const auto res = run_example("ex2");
  o.require(res.status == kExitOk, "status");
  if (!o.ok) return o;
  const auto& pure = res.table->column("pure_map");
  o.require(within(pure, reference::kLinearListing, 5e-5), "pure map listing");
  const auto xs = oracle::multi_inertial([](double v) { return 0.8 * v; }, 0.2, 0.2, 0.2, 0.9, 1.0, 0.5, 1);
  const double x2 = res.table->column("multi_inertial").at(2);
  o.require(std::abs(x2 - xs[2]) < 5e-5, "x_2 vs oracle");
  o.require(std::abs(xs[2] - 0.3640) < 5e-5, "oracle x_2");
  o.require(!res.discrepancies.empty() && !res.discrepancies[0].notes.empty() &&
                !res.discrepancies[0].candidate("multi_inertial").reproduces,
            "discrepancy report");
  return o;
}

Outcome step_bound_diagnostic() {
  Outcome o;
  const auto res = run_example("ex1");
  const auto& trace = res.run("multi_inertial").trace;
  const auto literal = check_step_bound(trace, BoundMode::PaperLiteral);
  o.require(!literal.empty() && literal[0].n == 1 && !literal[0].satisfied, "literal bound at n = 1");
  if (!literal.empty()) o.require(literal[0].gap >= 0.03 && literal[0].gap <= 0.04, "literal gap range");
  for (const auto& b : check_step_bound(trace, BoundMode::ResidualCorrected))
    if (!b.satisfied || b.gap > 1e-9) {
      o.require(false, "residual-corrected fails at n = " + std::to_string(b.n));
      break;
    }
  return o;
}

Outcome reduction_identity() {
  Outcome o;
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> lam(0.05, 0.95), start(-3.0, 3.0);
  const auto space = builtin_scalar_p(1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double l = lam(rng), x0 = start(rng), x1 = start(rng);
    const auto op = trial % 2 == 0 ? builtin_saturating() : builtin_linear(0.8);
    IterationConfig cfg;
    cfg.lambda = Schedule::constant(l);
    cfg.x0 = Vector{x0};
    cfg.x1 = Vector{x1};
    cfg.max_iter = 50;
    const auto mi = run_multi_inertial(space, op, cfg);
    const auto km = run_km(space, op, Schedule::constant(l / 2), Vector{x1}, 50);
    for (std::size_t k = 1; k < mi.iterate_count(); ++k)
      if (!approx_equal(mi.iterate(k), km.iterate(k - 1), 1e-12)) {
        o.require(false, "trial " + std::to_string(trial) + " step " + std::to_string(k));
        break;
      }
  }
  return o;
}

Outcome axiom_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  std::vector<ConeBpSpace> spaces = {builtin_scalar_p(0.3), builtin_scalar_p(0.5), builtin_scalar_p(1.0)};
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  while (spaces.size() < 6) {
    Matrix2 a{{{entry(rng), entry(rng)}, {entry(rng), entry(rng)}}};
    if (std::abs(a[0][0] * a[1][1] - a[0][1] * a[1][0]) < 0.1) continue;
    spaces.push_back(builtin_r2_matrix(a));
  }
  std::uint64_t seed = 1;
  for (const auto& s : spaces) {
    const auto rep = check_axioms(s, 10000, seed++);
    o.require(rep.passed(), s.descriptor().builtin + " " + s.descriptor().params.dump());
  }
  const double dt = seconds_since(t0);
  o.require(dt < 5.0, "runtime " + std::to_string(dt) + " s");
  return o;
}

Outcome convergence_properties() {
  Outcome o;
  const auto ex1 = run_example("ex1");
  const auto& t = ex1.run("multi_inertial").trace;
  o.require(t.iterate_count() > 500 && t.space.scalarize(t.iterate(500), Vector{0.0}) < 0.02, "x_500 < 0.02");
  for (std::size_t k = 1; k <= 100; ++k)
    if (!(t.residual(k) < t.residual(k - 1))) {
      o.require(false, "residual not decreasing at n = " + std::to_string(k));
      break;
    }
  const auto ex2 = run_example("ex2");
  const auto& run = ex2.run("multi_inertial");
  o.require(measured_step_ratio(run.trace) <= 0.9, "step ratio");
  o.require(run.certificate && run.certificate->certified, "certificate");
  return o;
}

Outcome coincidence() {
  Outcome o;
  const auto res = run_example("ex3");
  o.require(res.status == kExitOk, "status");
  if (!o.ok) return o;
  const auto& t = res.run("coincidence").trace;
  for (std::size_t i = 1; i < t.records.size(); ++i)
    if (std::abs(t.records[i].step_delta / t.records[i - 1].step_delta - 0.8) > 1e-9) {
      o.require(false, "ratio at n = " + std::to_string(i));
      break;
    }
  const Vector limit = vector_from_json(t.extras.at("limit"));
  o.require(t.records.size() <= 200 && t.space.scalarize(limit, Vector::zero(2)) < 1e-8, "limit");
  const auto space = builtin_scalar_p(1.0);
  const auto rep = probe_compat(parse_pair_spec("S=T=linear:0.8", space), 1000, 7);
  o.require(!rep.passed(), "S = T variant should violate compatibility");
  std::ostringstream out, err;
  CheckRequest req;
  req.pair = "S=T=linear:0.8";
  o.require(cli_check(req, out, err) == kExitViolations, "check exit code");
  return o;
}

Outcome validators() {
  Outcome o;
  const auto cfg = example_config("ex1").schemes[0].config;
  const auto ok = theorem1_preconditions(builtin_scalar_p(1.0), cfg);
  o.require(ok.passed() && std::abs(ok.check("kappa_b_alpha").value - 0.2) < 1e-12, "ex1 passes");
  const ConeBpSpace heavy(1, [](const Vector& x) { return ConeValue{{std::abs(x[0])}}; }, 3.0, 1.0, 2.0);
  o.require(!theorem1_preconditions(heavy, cfg).passed(), "kappa = 2, b = 3 fails");
  const WeakContractionConsts k{1, 0, 0, 0.8};
  const double q = weak_q(k, 0.9);
  o.require(q >= 0.888 && q <= 0.889, "weak_q = " + std::to_string(q));
  o.require(theorem2_preconditions(k, example_config("ex2").schemes[0].config).passed(), "theorem 2 validator");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"example I golden table", golden_ex1},
      {"example IV golden table", golden_ex4},
      {"example II dual reproduction", dual_ex2},
      {"step bound diagnostic", step_bound_diagnostic},
      {"reduction identity", reduction_identity},
      {"axiom suite", axiom_suite},
      {"convergence properties", convergence_properties},
      {"coincidence", coincidence},
      {"theorem validators", validators},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %zu. %s%s%s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, o.ok ? "" : ": ",
                o.detail.c_str());
    if (!o.ok) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
