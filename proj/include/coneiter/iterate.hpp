#pragma once

// Fixed-point schemes with full trace recording:
//
//   multi-inertial lambda-iteration (three extrapolations, four error terms)
//     y_n     = x_n + alpha_n (x_n - x_{n-1}) + eps_n
//     z_n     = x_n + beta_n  (x_n - x_{n-1}) + rho_n
//     u_n     = x_n + gamma_n (x_n - x_{n-1}) + omega_n
//     x_{n+1} = (1 - lambda_n) y_n + (lambda_n / 2) z_n + (lambda_n / 2) T(u_n) + theta_n
//
//   Krasnoselskii-Mann      x_{n+1} = (1 - lambda_n) x_n + lambda_n T(x_n)
//   inertial KM             w_n = x_n + alpha_n (x_n - x_{n-1})
//                           x_{n+1} = (1 - lambda_n) w_n + lambda_n T(w_n)
//   coincidence (Picard)    T(x_n) = S(x_{n+1}),  y_n = T(x_n)

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coneiter/cone_space.hpp"
#include "coneiter/errors.hpp"
#include "coneiter/operators.hpp"
#include "coneiter/schedule.hpp"
#include "coneiter/vector.hpp"

namespace coneiter {

/// One perturbation sequence; zero when neither a table nor a rule is given.
/// Table entries are consumed from n = 1 and are zero past the end.
struct ErrorSequence {
  std::vector<Vector> table;
  std::function<Vector(int)> rule;

  [[nodiscard]] bool is_zero() const noexcept { return table.empty() && !rule; }

  [[nodiscard]] Vector at(int n, std::size_t dim) const {
    if (rule) return rule(n);
    const auto i = static_cast<std::size_t>(n - 1);
    if (i < table.size()) return table[i];
    return Vector::zero(dim);
  }
};

struct ErrorSequences {
  ErrorSequence eps, rho, omega, theta;
  /// Declared bound on each partial sum of ||D(.)||.
  double budget = std::numeric_limits<double>::infinity();

  [[nodiscard]] bool all_zero() const noexcept {
    return eps.is_zero() && rho.is_zero() && omega.is_zero() && theta.is_zero();
  }
};

struct StopRule {
  double residual_tol = 0.0;
  double step_tol = 0.0;
};

struct IterationConfig {
  Schedule alpha = Schedule::constant(0.0);
  Schedule beta = Schedule::constant(0.0);
  Schedule gamma = Schedule::constant(0.0);
  Schedule lambda = Schedule::constant(0.5);
  std::optional<double> inertia_cap;  // alpha in [0, 1); defaults to the observed supremum
  std::optional<double> delta;        // in (0, 1/2); defaults to min_n min(lambda_n, 1 - lambda_n)
  ErrorSequences errors;
  Vector x0;
  Vector x1;
  int max_iter = 100;
  StopRule stop;
  bool lean = false;
};

/// Supremum of alpha_n, beta_n, gamma_n over n <= max_iter unless a cap is declared.
inline double effective_inertia_cap(const IterationConfig& cfg) {
  if (cfg.inertia_cap) return *cfg.inertia_cap;
  return std::max({0.0, cfg.alpha.supremum(cfg.max_iter), cfg.beta.supremum(cfg.max_iter),
                   cfg.gamma.supremum(cfg.max_iter)});
}

inline double effective_delta(const IterationConfig& cfg) {
  if (cfg.delta) return *cfg.delta;
  double d = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= std::max(cfg.max_iter, 1); ++n) {
    const double l = cfg.lambda(n);
    d = std::min({d, l, 1.0 - l});
  }
  return d;
}

struct AuxValues {
  Vector y, z, u, Tu;
};

struct StepRecord {
  int n = 0;
  Vector x;                  // iterate produced by step n
  double step_delta = 0.0;   // Delta(x, previous iterate)
  double residual = 0.0;     // Delta(x, T x); Delta(Sx, Tx) for coincidence runs
  std::optional<AuxValues> aux;
  // Filled post hoc by the analysis module.
  std::optional<double> c_n;
  std::optional<double> zeta;
  std::optional<bool> bound_ok;
  std::optional<double> gap;
};

enum class Termination { Residual, Step, MaxIter };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::Residual: return "residual";
    case Termination::Step: return "step";
    case Termination::MaxIter: return "max_iter";
  }
  return "max_iter";
}

inline Termination termination_from_string(const std::string& s) {
  if (s == "residual") return Termination::Residual;
  if (s == "step") return Termination::Step;
  if (s == "max_iter") return Termination::MaxIter;
  throw StructuralError("unknown termination '" + s + "'");
}

struct Trace {
  std::string scheme;       // multi_inertial | km | inertial_km | coincidence
  std::string operator_name;
  ConeBpSpace space;
  IterationConfig config;
  std::vector<Vector> starts;  // x_0 (and x_1 for two-start schemes)
  std::vector<double> start_residuals;
  std::vector<StepRecord> records;
  Termination termination = Termination::MaxIter;
  std::array<double, 4> error_sums{};  // eps, rho, omega, theta
  std::vector<std::string> warnings;
  nlohmann::json extras = nlohmann::json::object();

  /// Iterate index of the point stored in record n is n + offset().
  [[nodiscard]] int offset() const noexcept { return static_cast<int>(starts.size()) - 1; }

  [[nodiscard]] std::size_t iterate_count() const noexcept { return starts.size() + records.size(); }

  /// x_k for k in [0, iterate_count()).
  [[nodiscard]] const Vector& iterate(std::size_t k) const {
    if (k < starts.size()) return starts[k];
    return records.at(k - starts.size()).x;
  }

  [[nodiscard]] const Vector& last() const { return iterate(iterate_count() - 1); }

  /// Residual recorded alongside x_k.
  [[nodiscard]] double residual(std::size_t k) const {
    if (k < starts.size()) return start_residuals.at(k);
    return records.at(k - starts.size()).residual;
  }

  /// Delta(x_k, reference) for every recorded iterate.
  [[nodiscard]] std::vector<double> distances_to(const Vector& reference) const {
    std::vector<double> out;
    out.reserve(iterate_count());
    for (std::size_t k = 0; k < iterate_count(); ++k) out.push_back(space.scalarize(iterate(k), reference));
    return out;
  }
};

/// Raised for non-finite iterates or steps above the divergence threshold.
/// Carries the trace recorded so far, including the offending step.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& what, Trace trace) : Error(what), trace_(std::move(trace)) {}
  [[nodiscard]] const Trace& trace() const noexcept { return trace_; }

private:
  Trace trace_;
};

inline constexpr double kDivergenceStep = 1e12;
inline constexpr double kInversionTolerance = 1e-6;

namespace detail {

inline void validate_common(const IterationConfig& cfg) {
  if (cfg.max_iter < 1) throw ConfigurationError("max_iter must be >= 1");
  if (!(cfg.stop.residual_tol >= 0.0) || !(cfg.stop.step_tol >= 0.0))
    throw ConfigurationError("stop tolerances must be nonnegative");
}

inline void validate_inertia(const Schedule& s, const char* name, double cap, int max_iter) {
  for (int n = 1; n <= max_iter; ++n) {
    const double v = s(n);
    if (!(v >= 0.0 && v <= cap))
      throw ConfigurationError(std::string(name) + "_n = " + std::to_string(v) + " outside [0, " +
                                   std::to_string(cap) + "] at n = " + std::to_string(n),
                               n);
  }
}

inline void validate_multi_inertial(const IterationConfig& cfg) {
  validate_common(cfg);
  const double cap = effective_inertia_cap(cfg);
  if (!(cap >= 0.0 && cap < 1.0)) throw ConfigurationError("inertia cap must lie in [0, 1)");
  validate_inertia(cfg.alpha, "alpha", cap, cfg.max_iter);
  validate_inertia(cfg.beta, "beta", cap, cfg.max_iter);
  validate_inertia(cfg.gamma, "gamma", cap, cfg.max_iter);
  const double delta = effective_delta(cfg);
  if (!(delta > 0.0 && delta < 0.5))
    throw ConfigurationError("delta must lie in (0, 1/2), got " + std::to_string(delta));
  for (int n = 1; n <= cfg.max_iter; ++n) {
    const double l = cfg.lambda(n);
    if (!(l >= delta && l <= 1.0 - delta))
      throw ConfigurationError("lambda_n = " + std::to_string(l) + " outside [delta, 1 - delta] at n = " +
                                   std::to_string(n),
                               n);
  }
}

inline void validate_relaxation_km(const Schedule& lambda, int max_iter) {
  for (int n = 1; n <= max_iter; ++n) {
    const double l = lambda(n);
    if (!(l > 0.0 && l <= 1.0))
      throw ConfigurationError("KM relaxation lambda_n = " + std::to_string(l) + " outside (0, 1] at n = " +
                                   std::to_string(n),
                               n);
  }
}

// Appends the record, applies divergence and stop rules. Returns true when the run should stop.
inline bool push_step(Trace& trace, StepRecord rec, const StopRule& stop) {
  const int n = rec.n;
  const bool finite = rec.x.all_finite() && std::isfinite(rec.step_delta);
  const bool blown = rec.step_delta > kDivergenceStep;
  if (!trace.space.in_domain(rec.x))
    throw StructuralError("iterate left the domain C at n = " + std::to_string(n));
  trace.records.push_back(std::move(rec));
  if (!finite || blown) {
    trace.termination = Termination::MaxIter;
    throw DivergenceError(std::string(finite ? "step size exceeded 1e12" : "non-finite iterate") +
                              " at n = " + std::to_string(n),
                          trace);
  }
  const auto& r = trace.records.back();
  if (r.residual < stop.residual_tol) {
    trace.termination = Termination::Residual;
    return true;
  }
  if (r.step_delta < stop.step_tol) {
    trace.termination = Termination::Step;
    return true;
  }
  return false;
}

inline Trace start_trace(const char* scheme, const ConeBpSpace& space, const OperatorSpec& T,
                         const IterationConfig& cfg) {
  return Trace{scheme, T.name, space, cfg, {}, {}, {}, Termination::MaxIter, {}, {}, nlohmann::json::object()};
}

}  // namespace detail

/// Runs the multi-inertial lambda-iteration from (x_0, x_1). Record n holds x_{n+1}.
inline Trace run_multi_inertial(const ConeBpSpace& space, const OperatorSpec& T, const IterationConfig& cfg) {
  detail::validate_multi_inertial(cfg);
  space.require_dim(cfg.x0);
  space.require_dim(cfg.x1);
  const std::size_t dim = space.dim();

  Trace trace = detail::start_trace("multi_inertial", space, T, cfg);
  trace.starts = {cfg.x0, cfg.x1};
  trace.start_residuals = {space.scalarize(cfg.x0, T(cfg.x0)), space.scalarize(cfg.x1, T(cfg.x1))};

  const auto& err = cfg.errors;
  bool budget_warned = false;
  Vector prev = cfg.x0;
  Vector cur = cfg.x1;
  for (int n = 1; n <= cfg.max_iter; ++n) {
    const Vector d = cur - prev;
    const Vector eps = err.eps.at(n, dim);
    const Vector rho = err.rho.at(n, dim);
    const Vector omega = err.omega.at(n, dim);
    const Vector theta = err.theta.at(n, dim);
    const double lambda = cfg.lambda(n);

    Vector y = cur + cfg.alpha(n) * d + eps;
    Vector z = cur + cfg.beta(n) * d + rho;
    Vector u = cur + cfg.gamma(n) * d + omega;
    Vector tu = T(u);
    Vector next = (1.0 - lambda) * y + (0.5 * lambda) * z + (0.5 * lambda) * tu + theta;

    trace.error_sums[0] += space.magnitude(eps);
    trace.error_sums[1] += space.magnitude(rho);
    trace.error_sums[2] += space.magnitude(omega);
    trace.error_sums[3] += space.magnitude(theta);
    if (!budget_warned) {
      static constexpr std::array<const char*, 4> names{"eps", "rho", "omega", "theta"};
      for (std::size_t i = 0; i < 4; ++i) {
        if (trace.error_sums[i] > err.budget) {
          trace.warnings.push_back(std::string("error partial sum for ") + names[i] +
                                   " exceeded budget at n = " + std::to_string(n));
          budget_warned = true;
        }
      }
    }

    StepRecord rec;
    rec.n = n;
    rec.step_delta = space.scalarize(next, cur);
    rec.residual = next.all_finite() ? space.scalarize(next, T(next)) : std::nan("");
    if (!cfg.lean) rec.aux = AuxValues{std::move(y), std::move(z), std::move(u), std::move(tu)};
    rec.x = next;
    if (detail::push_step(trace, std::move(rec), cfg.stop)) break;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return trace;
}

/// Krasnoselskii-Mann from cfg.x0 with relaxation cfg.lambda in (0, 1]. Record n holds x_n.
inline Trace run_km(const ConeBpSpace& space, const OperatorSpec& T, const IterationConfig& cfg) {
  detail::validate_common(cfg);
  detail::validate_relaxation_km(cfg.lambda, cfg.max_iter);
  space.require_dim(cfg.x0);

  Trace trace = detail::start_trace("km", space, T, cfg);
  trace.starts = {cfg.x0};
  trace.start_residuals = {space.scalarize(cfg.x0, T(cfg.x0))};
  Vector cur = cfg.x0;
  for (int n = 1; n <= cfg.max_iter; ++n) {
    const double lambda = cfg.lambda(n);
    Vector tx = T(cur);
    Vector next = (1.0 - lambda) * cur + lambda * tx;
    StepRecord rec;
    rec.n = n;
    rec.step_delta = space.scalarize(next, cur);
    rec.residual = next.all_finite() ? space.scalarize(next, T(next)) : std::nan("");
    if (!cfg.lean) rec.aux = AuxValues{cur, cur, cur, std::move(tx)};
    rec.x = next;
    if (detail::push_step(trace, std::move(rec), cfg.stop)) break;
    cur = std::move(next);
  }
  return trace;
}

inline Trace run_km(const ConeBpSpace& space, const OperatorSpec& T, const Schedule& lambda, const Vector& x0,
                    int max_iter, StopRule stop = {}) {
  IterationConfig cfg;
  cfg.lambda = lambda;
  cfg.x0 = x0;
  cfg.max_iter = max_iter;
  cfg.stop = stop;
  return run_km(space, T, cfg);
}

/// One-extrapolation inertial KM from (x_0, x_1) using cfg.alpha and cfg.lambda.
/// Record n holds x_{n+1}.
inline Trace run_inertial_km(const ConeBpSpace& space, const OperatorSpec& T, const IterationConfig& cfg) {
  detail::validate_common(cfg);
  detail::validate_relaxation_km(cfg.lambda, cfg.max_iter);
  const double cap = cfg.inertia_cap.value_or(std::max(0.0, cfg.alpha.supremum(cfg.max_iter)));
  if (!(cap >= 0.0 && cap < 1.0)) throw ConfigurationError("inertia cap must lie in [0, 1)");
  detail::validate_inertia(cfg.alpha, "alpha", cap, cfg.max_iter);
  space.require_dim(cfg.x0);
  space.require_dim(cfg.x1);

  Trace trace = detail::start_trace("inertial_km", space, T, cfg);
  trace.starts = {cfg.x0, cfg.x1};
  trace.start_residuals = {space.scalarize(cfg.x0, T(cfg.x0)), space.scalarize(cfg.x1, T(cfg.x1))};
  Vector prev = cfg.x0;
  Vector cur = cfg.x1;
  for (int n = 1; n <= cfg.max_iter; ++n) {
    const double lambda = cfg.lambda(n);
    Vector w = cur + cfg.alpha(n) * (cur - prev);
    Vector tw = T(w);
    Vector next = (1.0 - lambda) * w + lambda * tw;
    StepRecord rec;
    rec.n = n;
    rec.step_delta = space.scalarize(next, cur);
    rec.residual = next.all_finite() ? space.scalarize(next, T(next)) : std::nan("");
    if (!cfg.lean) rec.aux = AuxValues{w, w, w, std::move(tw)};
    rec.x = next;
    if (detail::push_step(trace, std::move(rec), cfg.stop)) break;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return trace;
}

inline Trace run_inertial_km(const ConeBpSpace& space, const OperatorSpec& T, const Schedule& lambda,
                             const Schedule& alpha, const Vector& x0, const Vector& x1, int max_iter,
                             StopRule stop = {}) {
  IterationConfig cfg;
  cfg.lambda = lambda;
  cfg.alpha = alpha;
  cfg.x0 = x0;
  cfg.x1 = x1;
  cfg.max_iter = max_iter;
  cfg.stop = stop;
  return run_inertial_km(space, T, cfg);
}

/// Picard sequence for a coincidence pair: x_n = solve_S(T(x_{n-1})), y_n = T(x_n).
/// Record n holds x_n with aux.y = y_n; step_delta is Delta(y_n, y_{n-1}) and the
/// run stops once it falls below stop.step_tol. extras carries the limit y and, for
/// pairs asserted weakly compatible, Delta(S T x, T S x) at the final point.
inline Trace run_coincidence(const CompatiblePairSpec& pair, const Vector& x0, int max_iter, StopRule stop = {}) {
  IterationConfig cfg;
  cfg.x0 = x0;
  cfg.max_iter = max_iter;
  cfg.stop = stop;
  detail::validate_common(cfg);
  const auto& space = pair.T.space;
  space.require_dim(x0);

  Trace trace = detail::start_trace("coincidence", space, pair.T, cfg);
  trace.operator_name = pair.name;
  trace.starts = {x0};
  trace.start_residuals = {space.scalarize(pair.S(x0), pair.T(x0))};
  Vector y_prev = pair.T(x0);
  // Only the step rule applies to coincidence runs.
  const StopRule step_only{0.0, stop.step_tol};
  for (int n = 1; n <= max_iter; ++n) {
    Vector x = pair.solve_S(y_prev);
    Vector sx = pair.S(x);
    const double inv = space.scalarize(sx, y_prev);
    if (!(inv <= kInversionTolerance))
      throw InversionError("solve_S round trip error " + std::to_string(inv) + " at n = " + std::to_string(n));
    Vector y = pair.T(x);
    StepRecord rec;
    rec.n = n;
    rec.step_delta = space.scalarize(y, y_prev);
    rec.residual = space.scalarize(sx, y);
    if (!cfg.lean) rec.aux = AuxValues{y, sx, x, y};
    rec.x = std::move(x);
    const bool done = detail::push_step(trace, std::move(rec), step_only);
    y_prev = std::move(y);
    if (done) break;
  }
  trace.extras["limit"] = to_json(y_prev);
  if (pair.weakly_compatible) {
    const Vector& p = trace.last();
    trace.extras["commutator"] = space.scalarize(pair.S(pair.T(p)), pair.T(pair.S(p)));
  }
  return trace;
}

}  // namespace coneiter
