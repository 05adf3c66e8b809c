#pragma once

// Per-step bounds and convergence preconditions, checked mechanically on traces.
//
// The one-step recursion is
//   Delta(x_{n+1}, x_n) <= c_n Delta(x_n, x_{n-1}) + zeta_n
// with three ways of computing (c_n, zeta_n):
//
//   paper_literal       c_n  = kb((1-l) a + (l/2) b + (l/2) g)
//                       zeta = kb((1-l) e_eps + (l/2) e_rho + (l/2) e_omega) + e_theta
//   p_corrected         weights raised to the power p; the four-term split costs b^2
//                       and each inner split one more b (normality applied once), so
//                       c_n = k b^3 sum w_i^p a_i^p, zeta = k b^3 sum w_i^p e_i + k b^2 e_theta
//   residual_corrected  paper_literal plus kb (l/2) Delta(T(u_n), u_n)
//
// The printed expansion treats T(u_n) - x_n as if it were u_n - x_n; only the
// residual-corrected form holds on real traces (exactly so when b = kappa = p = 1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "coneiter/cone_space.hpp"
#include "coneiter/errors.hpp"
#include "coneiter/iterate.hpp"
#include "coneiter/operators.hpp"

namespace coneiter {

enum class BoundMode { PaperLiteral, PCorrected, ResidualCorrected };

inline const char* to_string(BoundMode m) {
  switch (m) {
    case BoundMode::PaperLiteral: return "paper_literal";
    case BoundMode::PCorrected: return "p_corrected";
    case BoundMode::ResidualCorrected: return "residual_corrected";
  }
  return "paper_literal";
}

inline BoundMode bound_mode_from_string(const std::string& s) {
  if (s == "paper_literal") return BoundMode::PaperLiteral;
  if (s == "p_corrected") return BoundMode::PCorrected;
  if (s == "residual_corrected") return BoundMode::ResidualCorrected;
  throw StructuralError("unknown bound mode '" + s + "'");
}

inline constexpr double kBoundTolerance = 1e-9;

struct StepCoefficients {
  double c_n = 0.0;
  double zeta_n = 0.0;
};

/// Per-step parameters of the multi-inertial update. KM-type schemes map onto
/// it with lambda' = 2 lambda and all three inertia weights equal.
struct StepParameters {
  double alpha = 0.0, beta = 0.0, gamma = 0.0, lambda = 0.0;
  double e_eps = 0.0, e_rho = 0.0, e_omega = 0.0, e_theta = 0.0;
};

inline StepParameters step_parameters(const ConeBpSpace& space, const IterationConfig& cfg, int n) {
  const std::size_t dim = space.dim();
  return {cfg.alpha(n),
          cfg.beta(n),
          cfg.gamma(n),
          cfg.lambda(n),
          space.magnitude(cfg.errors.eps.at(n, dim)),
          space.magnitude(cfg.errors.rho.at(n, dim)),
          space.magnitude(cfg.errors.omega.at(n, dim)),
          space.magnitude(cfg.errors.theta.at(n, dim))};
}

inline StepCoefficients step_coefficients(const ConeBpSpace& space, const StepParameters& sp, BoundMode mode,
                                          const AuxValues* aux = nullptr) {
  const double kb = space.kappa_b();
  const double l = sp.lambda;
  const double w1 = 1.0 - l, w2 = 0.5 * l, w3 = 0.5 * l;
  if (mode == BoundMode::PCorrected) {
    const double p = space.p();
    const double b = space.b();
    const double k = space.kappa() * b * b * b;
    auto pw = [p](double v) { return std::pow(std::abs(v), p); };
    const double c = k * (pw(w1) * pw(sp.alpha) + pw(w2) * pw(sp.beta) + pw(w3) * pw(sp.gamma));
    const double z = k * (pw(w1) * sp.e_eps + pw(w2) * sp.e_rho + pw(w3) * sp.e_omega) +
                     space.kappa() * b * b * sp.e_theta;
    return {c, z};
  }
  StepCoefficients out{kb * (w1 * sp.alpha + w2 * sp.beta + w3 * sp.gamma),
                       kb * (w1 * sp.e_eps + w2 * sp.e_rho + w3 * sp.e_omega) + sp.e_theta};
  if (mode == BoundMode::ResidualCorrected) {
    if (aux == nullptr) throw MissingAuxError("residual_corrected bounds need recorded aux values");
    out.zeta_n += kb * w3 * space.scalarize(aux->Tu, aux->u);
  }
  return out;
}

/// (c_n, zeta_n) for step n of a multi-inertial configuration.
inline StepCoefficients step_coefficients(const ConeBpSpace& space, const IterationConfig& cfg, int n,
                                          BoundMode mode, const AuxValues* aux = nullptr) {
  if (n < 1) throw ParameterError("step index must be >= 1");
  return step_coefficients(space, step_parameters(space, cfg, n), mode, aux);
}

struct StepBound {
  int n = 0;
  double c_n = 0.0;
  double zeta_n = 0.0;
  BoundMode mode = BoundMode::PaperLiteral;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double gap = 0.0;  // lhs - rhs
};

inline nlohmann::json to_json(const StepBound& s) {
  return {{"n", s.n},     {"c_n", s.c_n}, {"zeta_n", s.zeta_n}, {"mode", to_string(s.mode)},
          {"lhs", s.lhs}, {"rhs", s.rhs}, {"satisfied", s.satisfied}, {"gap", s.gap}};
}

inline nlohmann::json to_json(const std::vector<StepBound>& v) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : v) j.push_back(to_json(s));
  return j;
}

namespace detail {

inline StepParameters scheme_parameters(const Trace& trace, int n) {
  const auto& cfg = trace.config;
  if (trace.scheme == "multi_inertial") return step_parameters(trace.space, cfg, n);
  if (trace.scheme == "km") return {0.0, 0.0, 0.0, 2.0 * cfg.lambda(n)};
  if (trace.scheme == "inertial_km") {
    const double a = cfg.alpha(n);
    return {a, a, a, 2.0 * cfg.lambda(n)};
  }
  throw StructuralError("step bounds are not defined for scheme '" + trace.scheme + "'");
}

}  // namespace detail

/// Compares each recorded step against c_n Delta(x_n, x_{n-1}) + zeta_n.
inline std::vector<StepBound> check_step_bound(const Trace& trace, BoundMode mode) {
  if (trace.iterate_count() < 3) throw StructuralError("check_step_bound needs at least two steps");
  std::vector<StepBound> out;
  out.reserve(trace.records.size());
  // Delta(x_n, x_{n-1}) for the step producing record n; zero before the first KM step.
  double prev_step = trace.starts.size() >= 2 ? trace.space.scalarize(trace.starts[1], trace.starts[0]) : 0.0;
  for (const auto& rec : trace.records) {
    const auto sp = detail::scheme_parameters(trace, rec.n);
    const AuxValues* aux = rec.aux ? &*rec.aux : nullptr;
    if (mode == BoundMode::ResidualCorrected && aux == nullptr)
      throw MissingAuxError("trace was recorded lean; residual_corrected needs aux values");
    const auto co = step_coefficients(trace.space, sp, mode, aux);
    StepBound sb;
    sb.n = rec.n;
    sb.c_n = co.c_n;
    sb.zeta_n = co.zeta_n;
    sb.mode = mode;
    sb.lhs = rec.step_delta;
    sb.rhs = co.c_n * prev_step + co.zeta_n;
    sb.gap = sb.lhs - sb.rhs;
    sb.satisfied = sb.gap <= kBoundTolerance;
    out.push_back(sb);
    prev_step = rec.step_delta;
  }
  return out;
}

/// Copies bound columns (c_n, zeta_n, satisfied, gap) into the trace records.
inline void annotate(Trace& trace, const std::vector<StepBound>& bounds) {
  for (std::size_t i = 0; i < bounds.size() && i < trace.records.size(); ++i) {
    auto& r = trace.records[i];
    r.c_n = bounds[i].c_n;
    r.zeta = bounds[i].zeta_n;
    r.bound_ok = bounds[i].satisfied;
    r.gap = bounds[i].gap;
  }
}

// ---------------------------------------------------------------------------
// Theorem preconditions

struct ValidationCheck {
  std::string name;
  double value = 0.0;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::string theorem;
  std::vector<ValidationCheck> checks;

  [[nodiscard]] bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }

  [[nodiscard]] const ValidationCheck& check(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    throw StructuralError("no check named '" + name + "'");
  }

  [[nodiscard]] std::vector<std::string> failing() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.passed) out.push_back(c.name);
    return out;
  }
};

inline nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"theorem", r.theorem}, {"passed", r.passed()}, {"checks", checks}};
}

/// kappa b alpha < 1, lambda_n in [delta, 1 - delta], inertia within caps < 1,
/// and finite error partial sums over the configured horizon.
inline ValidationReport theorem1_preconditions(const ConeBpSpace& space, const IterationConfig& cfg) {
  ValidationReport rep{"quasi_nonexpansive_convergence", {}};
  const int horizon = std::max(cfg.max_iter, 1);
  const double cap = effective_inertia_cap(cfg);

  const double kba = space.kappa_b() * cap;
  rep.checks.push_back({"kappa_b_alpha", kba, kba < 1.0, "kappa*b*alpha must be < 1"});

  double sup = 0.0;
  bool within = true;
  for (const Schedule* s : {&cfg.alpha, &cfg.beta, &cfg.gamma}) {
    sup = std::max(sup, s->supremum(horizon));
    within = within && s->infimum(horizon) >= 0.0 && s->supremum(horizon) <= cap;
  }
  rep.checks.push_back({"inertia_caps", sup, within && cap < 1.0 && cap >= 0.0,
                        "alpha_n, beta_n, gamma_n in [0, alpha] with alpha < 1"});

  const double delta = effective_delta(cfg);
  rep.checks.push_back({"delta_range", delta, delta > 0.0 && delta < 0.5, "delta in (0, 1/2)"});

  const double lmin = cfg.lambda.infimum(horizon), lmax = cfg.lambda.supremum(horizon);
  rep.checks.push_back({"lambda_range", lmin, lmin >= delta && lmax <= 1.0 - delta,
                        "lambda_n in [delta, 1 - delta]; value is min lambda_n"});

  double worst = 0.0;
  if (!cfg.errors.all_zero()) {
    std::array<double, 4> sums{};
    for (int n = 1; n <= horizon; ++n) {
      const auto sp = step_parameters(space, cfg, n);
      sums[0] += sp.e_eps;
      sums[1] += sp.e_rho;
      sums[2] += sp.e_omega;
      sums[3] += sp.e_theta;
    }
    worst = *std::max_element(sums.begin(), sums.end());
  }
  const bool budget_ok = cfg.errors.all_zero() || (std::isfinite(cfg.errors.budget) && worst <= cfg.errors.budget);
  rep.checks.push_back({"error_budgets", worst, budget_ok && std::isfinite(worst),
                        "partial sums of ||D(error)|| within a finite budget"});
  return rep;
}

/// q_n = (s l - l^2 b_w + c_w (l - 1)) / (l^2 (a + b_w)).
inline double weak_q(const WeakContractionConsts& k, double lambda_n) {
  if (!(k.a + k.b_w > 0.0)) throw ParameterError("weak_q needs a + b_w > 0");
  if (!(lambda_n > 0.0 && lambda_n < 1.0)) throw ParameterError("weak_q needs lambda_n in (0, 1)");
  const double l = lambda_n;
  return (k.s * l - l * l * k.b_w + k.c_w * (l - 1.0)) / (l * l * (k.a + k.b_w));
}

/// 0 <= q_n < 1 for every scheduled n; reports q_max over the horizon.
inline ValidationReport theorem2_preconditions(const WeakContractionConsts& k, const IterationConfig& cfg) {
  ValidationReport rep{"weak_contraction_convergence", {}};
  double qmax = -std::numeric_limits<double>::infinity();
  bool ok = true;
  int first_bad = 0;
  for (int n = 1; n <= std::max(cfg.max_iter, 1); ++n) {
    const double q = weak_q(k, cfg.lambda(n));
    qmax = std::max(qmax, q);
    if (!(q >= 0.0 && q < 1.0) && ok) {
      ok = false;
      first_bad = n;
    }
  }
  rep.checks.push_back({"q_n_range", qmax, ok,
                        ok ? "0 <= q_n < 1 for all n; value is q_max"
                           : "q_n outside [0, 1) first at n = " + std::to_string(first_bad)});
  return rep;
}

/// q = r / (a + b_w).
inline double coincidence_factor(const CompatiblePairSpec& pair) {
  const auto& c = pair.consts;
  if (!(c.a + c.b_w > 0.0)) throw ParameterError("coincidence factor needs a + b_w > 0");
  return c.r / (c.a + c.b_w);
}

inline ValidationReport theorem3_preconditions(const CompatiblePairSpec& pair) {
  ValidationReport rep{"coincidence", {}};
  const double q = coincidence_factor(pair);
  rep.checks.push_back({"coincidence_factor", q, pair.consts.r >= 0.0 && q < 1.0, "0 <= r < a + b_w"});
  return rep;
}

// ---------------------------------------------------------------------------
// Cauchy certification

struct ConvergenceCertificate {
  std::vector<double> steps;  // steps[k-1] = Delta(x_k, x_{k-1})
  double kappa_b = 1.0;
  double c_star = 0.0;
  double partial_sum = 0.0;
  double geometric_tail_bound = 0.0;
  double tolerance = 0.0;
  bool certified = false;

  /// Bound on Delta(x_m, x_n) from the recorded steps, n <= m.
  [[nodiscard]] double cauchy_radius(std::size_t n, std::size_t m) const {
    if (n > m) std::swap(n, m);
    m = std::min(m, steps.size());
    double s = 0.0;
    for (std::size_t k = n; k < m; ++k) s += steps[k];
    return kappa_b * s;
  }

  /// Bound on the displacement between x_n and any later point, including the limit.
  [[nodiscard]] double remaining_bound(std::size_t n) const {
    return cauchy_radius(n, steps.size()) + geometric_tail_bound;
  }

  [[nodiscard]] const char* verdict() const noexcept { return certified ? "certified" : "inconclusive"; }
};

inline nlohmann::json to_json(const ConvergenceCertificate& c) {
  return {{"partial_sum", c.partial_sum},
          {"geometric_tail_bound", c.geometric_tail_bound},
          {"c_star", c.c_star},
          {"tolerance", c.tolerance},
          {"steps", c.steps.size()},
          {"verdict", c.verdict()}};
}

/// Largest ratio Delta(x_{k+1},x_k) / Delta(x_k,x_{k-1}) after a burn-in window.
inline double measured_step_ratio(const Trace& trace, std::size_t burn_in = 10) {
  std::vector<double> steps;
  for (std::size_t k = 1; k < trace.iterate_count(); ++k)
    steps.push_back(trace.space.scalarize(trace.iterate(k), trace.iterate(k - 1)));
  const std::size_t first = steps.size() > burn_in + 1 ? burn_in : 0;
  double worst = 0.0;
  for (std::size_t k = first + 1; k < steps.size(); ++k) {
    if (steps[k - 1] > 0.0) worst = std::max(worst, steps[k] / steps[k - 1]);
    else if (steps[k] > 0.0) worst = std::numeric_limits<double>::infinity();
  }
  return worst;
}

struct CertificateOptions {
  std::optional<double> c_star;     // measured when absent
  std::optional<double> tolerance;  // trace step_tol, or 1e-8 when that is zero
  std::size_t burn_in = 10;
};

/// Partial sums of steps plus the tail bound kb * last_step * c/(1-c).
/// Certified when c < 1 and the tail bound is below the tolerance.
inline ConvergenceCertificate cauchy_certificate(const Trace& trace, CertificateOptions opts = {}) {
  if (opts.c_star && !(*opts.c_star >= 0.0 && *opts.c_star < 1.0))
    throw ParameterError("c_star must lie in [0, 1)");
  ConvergenceCertificate cert;
  cert.kappa_b = trace.space.kappa_b();
  for (std::size_t k = 1; k < trace.iterate_count(); ++k)
    cert.steps.push_back(trace.space.scalarize(trace.iterate(k), trace.iterate(k - 1)));
  for (double s : cert.steps) cert.partial_sum += s;
  cert.c_star = opts.c_star ? *opts.c_star : measured_step_ratio(trace, opts.burn_in);
  cert.tolerance = opts.tolerance.value_or(trace.config.stop.step_tol > 0.0 ? trace.config.stop.step_tol : 1e-8);
  const double last = cert.steps.empty() ? 0.0 : cert.steps.back();
  if (cert.c_star < 1.0) {
    cert.geometric_tail_bound = cert.kappa_b * last * cert.c_star / (1.0 - cert.c_star);
    cert.certified = cert.geometric_tail_bound < cert.tolerance;
  } else {
    cert.geometric_tail_bound = std::numeric_limits<double>::infinity();
    cert.certified = false;
  }
  return cert;
}

inline ConvergenceCertificate cauchy_certificate(const Trace& trace, double c_star) {
  return cauchy_certificate(trace, CertificateOptions{c_star, std::nullopt, 10});
}

// ---------------------------------------------------------------------------
// Averaging inequalities

struct CheckResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  bool satisfied = false;
};

struct AveragingResult {
  CheckResult averaging;                   // Delta(sum eta_j u_j, p) bound
  std::optional<CheckResult> perturbed;    // with an additive perturbation vector
};

namespace detail {

inline CheckResult make_check(double lhs, double rhs) {
  return {lhs, rhs, lhs - rhs, lhs - rhs <= kBoundTolerance};
}

// Number of b factors a balanced split of m terms costs.
inline int split_depth(std::size_t m) {
  int depth = 0;
  std::size_t width = 1;
  while (width < m) {
    width *= 2;
    ++depth;
  }
  return std::max(depth, 1);
}

}  // namespace detail

/// Evaluates both sides of the averaging inequality and, when a perturbation is
/// given, of the perturbed form  (kb)^2 sum a_j Delta(v_j, p) + kb Delta(eta, 0).
/// p_corrected uses weights eta_j^p and the balanced-split constant kappa b^depth.
inline AveragingResult averaging_check(const ConeBpSpace& space, const std::vector<double>& weights,
                                       const std::vector<Vector>& points, const Vector& p_ref, BoundMode mode,
                                       const std::optional<Vector>& perturbation = std::nullopt) {
  if (weights.size() != points.size() || weights.empty())
    throw StructuralError("weights and points must be nonempty and of equal length");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ParameterError("weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ParameterError("weights must sum to 1");

  Vector avg = Vector::zero(space.dim());
  for (std::size_t j = 0; j < points.size(); ++j) avg += weights[j] * points[j];

  const bool corrected = mode == BoundMode::PCorrected;
  const double p = space.p();
  double weighted = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double w = corrected ? std::pow(weights[j], p) : weights[j];
    weighted += w * space.scalarize(points[j], p_ref);
  }
  const double k1 = corrected ? space.kappa() * std::pow(space.b(), detail::split_depth(points.size()))
                              : space.kappa_b();

  AveragingResult out;
  out.averaging = detail::make_check(space.scalarize(avg, p_ref), k1 * weighted);
  if (perturbation) {
    const double k2 = corrected ? k1 * space.b() : space.kappa_b() * space.kappa_b();
    const double lhs = space.scalarize(avg + *perturbation, p_ref);
    out.perturbed = detail::make_check(lhs, k2 * weighted + space.kappa_b() * space.magnitude(*perturbation));
  }
  return out;
}

struct AveragingSearchReport {
  BoundMode mode = BoundMode::PaperLiteral;
  int samples = 0;
  int violations = 0;
  double worst_gap = -std::numeric_limits<double>::infinity();
  std::vector<double> worst_weights;
  std::vector<Vector> worst_points;
  Vector worst_reference;
};

inline nlohmann::json to_json(const AveragingSearchReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& v : r.worst_points) pts.push_back(to_json(v));
  return {{"mode", to_string(r.mode)}, {"samples", r.samples},     {"violations", r.violations},
          {"worst_gap", r.worst_gap},  {"weights", r.worst_weights}, {"points", pts},
          {"reference", to_json(r.worst_reference)}};
}

/// Randomized counterexample search for the averaging inequality with m points.
/// Weights are uniform on the simplex; points and reference uniform on [-radius, radius]^d.
inline AveragingSearchReport averaging_search(const ConeBpSpace& space, std::size_t m, int samples,
                                              std::uint64_t seed, BoundMode mode, double radius = 10.0) {
  if (m == 0) throw ParameterError("averaging_search needs m >= 1");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  AveragingSearchReport rep;
  rep.mode = mode;
  rep.samples = samples;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> w(m);
    double total = 0.0;
    for (auto& v : w) total += (v = expo(rng));
    for (auto& v : w) v /= total;
    // Renormalize the last weight so the sum is 1 to within rounding.
    double head = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) head += w[j];
    w[m - 1] = std::max(0.0, 1.0 - head);
    std::vector<Vector> pts;
    for (std::size_t j = 0; j < m; ++j) pts.push_back(detail::sample_vector(rng, space.dim(), radius));
    const Vector ref = detail::sample_vector(rng, space.dim(), radius);
    const auto res = averaging_check(space, w, pts, ref, mode);
    if (!res.averaging.satisfied) ++rep.violations;
    if (res.averaging.gap > rep.worst_gap) {
      rep.worst_gap = res.averaging.gap;
      rep.worst_weights = w;
      rep.worst_points = pts;
      rep.worst_reference = ref;
    }
  }
  return rep;
}

}  // namespace coneiter
