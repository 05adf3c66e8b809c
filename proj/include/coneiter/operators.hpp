#pragma once

// Self-maps with declared operator classes and randomized probes that
// test the class inequalities on sampled points.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coneiter/cone_space.hpp"
#include "coneiter/errors.hpp"
#include "coneiter/vector.hpp"

namespace coneiter {

using Map = std::function<Vector(const Vector&)>;

enum class OperatorClass { None, QuasiNonexpansive, WeakContraction };

inline const char* to_string(OperatorClass c) {
  switch (c) {
    case OperatorClass::QuasiNonexpansive: return "quasi_nonexpansive";
    case OperatorClass::WeakContraction: return "weak_contraction";
    case OperatorClass::None: break;
  }
  return "none";
}

/// Known elements of F(T).
struct QuasiNonexpansiveWitness {
  std::vector<Vector> fixed_points;
};

/// Constants of a(Tx,Ty) + b_w(Delta(x,Tx) + Delta(y,Ty)) + c_w Delta(y,Tx) <= s Delta(x,y).
/// b_w and c_w are kept distinct from the space constant b.
struct WeakContractionConsts {
  double a = 0.0;
  double b_w = 0.0;
  double c_w = 0.0;
  double s = 0.0;

  void validate() const {
    if (a < 0 || b_w < 0 || c_w < 0 || s < 0)
      throw ParameterError("weak contraction constants must be nonnegative");
    if (!(a + b_w > 0) || !(a + b_w + c_w > 0))
      throw ParameterError("weak contraction requires a + b_w > 0 and a + b_w + c_w > 0");
  }
};

struct OperatorSpec {
  std::string name;
  Map map;
  ConeBpSpace space;
  OperatorClass declared_class = OperatorClass::None;
  std::optional<QuasiNonexpansiveWitness> witness;
  std::optional<WeakContractionConsts> weak_consts;
  nlohmann::json params = nlohmann::json::object();

  Vector operator()(const Vector& x) const { return map(x); }
};

struct CompatConsts {
  double a = 0.0;
  double b_w = 0.0;
  double r = 0.0;
};

/// A pair (S, T) for the coincidence iteration Tx_n = Sx_{n+1}.
/// solve_S is a right inverse of S on the range of T.
struct CompatiblePairSpec {
  std::string name;
  OperatorSpec T;
  Map S;
  Map solve_S;
  CompatConsts consts;
  bool weakly_compatible = false;
};

// ---------------------------------------------------------------------------
// Builtins

/// T(x) = x / (1 + |x|) on a scalar space, F(T) = {0}.
inline OperatorSpec builtin_saturating(const ConeBpSpace& space) {
  if (space.dim() != 1) throw ParameterError("saturating operator needs a scalar space");
  OperatorSpec op{"saturating",
                  [](const Vector& x) { return Vector{x[0] / (1.0 + std::abs(x[0]))}; },
                  space,
                  OperatorClass::QuasiNonexpansive,
                  {},
                  {}};
  op.witness = QuasiNonexpansiveWitness{{Vector{0.0}}};
  return op;
}

inline OperatorSpec builtin_saturating() { return builtin_saturating(builtin_scalar_p(1.0)); }

/// T(x) = q x. For 0 < q < 1 this is a weak contraction with a = 1,
/// b_w = c_w = 0 and s = q^p (which is q in the p = 1 spaces).
inline OperatorSpec builtin_linear(double q, const ConeBpSpace& space) {
  OperatorSpec op{"linear", [q](const Vector& x) { return q * x; }, space, OperatorClass::None, {}, {}};
  op.params = {{"q", q}};
  op.witness = QuasiNonexpansiveWitness{{Vector::zero(space.dim())}};
  if (q > 0.0 && q < 1.0) {
    op.declared_class = OperatorClass::WeakContraction;
    op.weak_consts = WeakContractionConsts{1.0, 0.0, 0.0, std::pow(q, space.p())};
  }
  return op;
}

inline OperatorSpec builtin_linear(double q) { return builtin_linear(q, builtin_scalar_p(1.0)); }

inline OperatorSpec builtin_identity(const ConeBpSpace& space) {
  OperatorSpec op{"identity", [](const Vector& x) { return x; }, space, OperatorClass::None, {}, {}};
  return op;
}

/// Parses "saturating", "identity" or "linear:<q>".
inline OperatorSpec parse_operator_spec(const std::string& spec, const ConeBpSpace& space) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  if (name == "saturating") return builtin_saturating(space);
  if (name == "identity") return builtin_identity(space);
  if (name == "linear") {
    if (colon == std::string::npos) throw StructuralError("linear operator needs ':<q>'");
    try {
      return builtin_linear(std::stod(spec.substr(colon + 1)), space);
    } catch (const std::logic_error&) {
      throw StructuralError("malformed operator spec '" + spec + "'");
    }
  }
  throw StructuralError("unknown operator '" + spec + "'");
}

/// Right inverse for the builtins usable as S.
inline Map builtin_inverse(const OperatorSpec& op) {
  if (op.name == "identity") return [](const Vector& y) { return y; };
  if (op.name == "linear") {
    const double q = op.params.at("q").get<double>();
    if (q == 0.0) throw ParameterError("linear:0 has no right inverse");
    return [q](const Vector& y) { return (1.0 / q) * y; };
  }
  throw StructuralError("no right inverse known for operator '" + op.name + "'");
}

/// Builds a pair from builtin S and T. Constants default to a = 1, b_w = 0,
/// r = q when T is linear(q).
inline CompatiblePairSpec make_builtin_pair(const OperatorSpec& s_op, const OperatorSpec& t_op,
                                            std::optional<CompatConsts> consts = {}) {
  CompatiblePairSpec pair{"S=" + s_op.name + ",T=" + t_op.name, t_op, s_op.map, builtin_inverse(s_op), {}, true};
  if (consts) {
    pair.consts = *consts;
  } else {
    const double q = t_op.params.value("q", 1.0);
    pair.consts = CompatConsts{1.0, 0.0, std::abs(q)};
  }
  return pair;
}

/// Parses "S=<op>,T=<op>" or "S=T=<op>".
inline CompatiblePairSpec parse_pair_spec(const std::string& spec, const ConeBpSpace& space,
                                          std::optional<CompatConsts> consts = {}) {
  std::string s_spec, t_spec;
  if (spec.rfind("S=T=", 0) == 0) {
    s_spec = t_spec = spec.substr(4);
  } else {
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      const auto comma = spec.find(',', pos);
      const std::string part = spec.substr(pos, comma - pos);
      if (part.rfind("S=", 0) == 0) s_spec = part.substr(2);
      else if (part.rfind("T=", 0) == 0) t_spec = part.substr(2);
      else if (!part.empty()) throw StructuralError("unexpected pair component '" + part + "'");
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (s_spec.empty() || t_spec.empty()) throw StructuralError("pair spec needs S and T: '" + spec + "'");
  auto pair = make_builtin_pair(parse_operator_spec(s_spec, space), parse_operator_spec(t_spec, space),
                                consts);
  pair.name = spec;
  return pair;
}

// ---------------------------------------------------------------------------
// Probes

struct ProbeViolation {
  std::string kind;  // "inequality" | "fixed_point" | "right_inverse"
  Vector x;
  Vector y;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

struct ProbeReport {
  static constexpr std::size_t kRetained = 10;

  std::string condition;
  int samples = 0;
  int violation_count = 0;
  std::vector<ProbeViolation> violations;  // worst first

  [[nodiscard]] bool passed() const noexcept { return violation_count == 0; }

  void record(ProbeViolation v) {
    ++violation_count;
    violations.push_back(std::move(v));
    std::stable_sort(violations.begin(), violations.end(),
                     [](const auto& l, const auto& r) { return l.gap > r.gap; });
    if (violations.size() > kRetained) violations.resize(kRetained);
  }

  /// Concatenates then re-sorts by violation magnitude.
  void merge(const ProbeReport& other) {
    samples += other.samples;
    const int count = violation_count + other.violation_count;
    for (const auto& v : other.violations) record(v);
    violation_count = count;
  }
};

inline nlohmann::json to_json(const ProbeReport& r) {
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : r.violations)
    vs.push_back({{"kind", v.kind}, {"x", to_json(v.x)}, {"y", to_json(v.y)},
                  {"lhs", v.lhs}, {"rhs", v.rhs}, {"gap", v.gap}});
  return {{"condition", r.condition}, {"samples", r.samples},
          {"violation_count", r.violation_count}, {"violations", vs}};
}

struct ProbeOptions {
  double radius = 10.0;
  double tolerance = 1e-9;
};

/// Checks Delta(Tx, p) <= Delta(x, p) for seeded x and every witness p.
inline ProbeReport probe_quasi_nonexpansive(const OperatorSpec& T, const QuasiNonexpansiveWitness& w,
                                            int samples, std::uint64_t seed,
                                            ProbeOptions opts = {}) {
  if (w.fixed_points.empty()) throw ParameterError("quasi-nonexpansive witness must be nonempty");
  const auto& space = T.space;
  ProbeReport report{"quasi_nonexpansive", samples, 0, {}};
  for (const auto& p : w.fixed_points) {
    const double fp = space.scalarize(T(p), p);
    if (fp > opts.tolerance) report.record({"fixed_point", p, T(p), fp, 0.0, fp});
  }
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Vector x = detail::sample_vector(rng, space.dim(), opts.radius);
    const Vector tx = T(x);
    for (const auto& p : w.fixed_points) {
      const double lhs = space.scalarize(tx, p);
      const double rhs = space.scalarize(x, p);
      if (lhs - rhs > opts.tolerance) report.record({"inequality", x, p, lhs, rhs, lhs - rhs});
    }
  }
  return report;
}

/// Evaluates both sides of the scalarized weak contraction inequality on seeded pairs.
inline ProbeReport probe_weak_contraction(const OperatorSpec& T, const WeakContractionConsts& k,
                                          int samples, std::uint64_t seed, ProbeOptions opts = {}) {
  k.validate();
  const auto& space = T.space;
  ProbeReport report{"weak_contraction", samples, 0, {}};
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Vector x = detail::sample_vector(rng, space.dim(), opts.radius);
    const Vector y = detail::sample_vector(rng, space.dim(), opts.radius);
    const Vector tx = T(x), ty = T(y);
    const double lhs = k.a * space.scalarize(tx, ty) +
                       k.b_w * (space.scalarize(x, tx) + space.scalarize(y, ty)) +
                       k.c_w * space.scalarize(y, tx);
    const double rhs = k.s * space.scalarize(x, y);
    if (lhs - rhs > opts.tolerance) report.record({"inequality", x, y, lhs, rhs, lhs - rhs});
  }
  return report;
}

/// Checks the compatibility-type inequality and the right-inverse property of solve_S.
inline ProbeReport probe_compat(const CompatiblePairSpec& pair, int samples, std::uint64_t seed,
                                ProbeOptions opts = {}) {
  const auto& space = pair.T.space;
  const auto& c = pair.consts;
  ProbeReport report{"compatibility", samples, 0, {}};
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Vector x = detail::sample_vector(rng, space.dim(), opts.radius);
    const Vector y = detail::sample_vector(rng, space.dim(), opts.radius);
    const Vector tx = pair.T(x), ty = pair.T(y);
    const Vector sx = pair.S(x), sy = pair.S(y);
    const double lhs = c.a * space.scalarize(tx, ty) +
                       c.b_w * (space.scalarize(sx, tx) + space.scalarize(sy, ty));
    const double rhs = c.r * space.scalarize(sx, sy);
    if (lhs - rhs > opts.tolerance) report.record({"inequality", x, y, lhs, rhs, lhs - rhs});

    const Vector back = pair.S(pair.solve_S(tx));
    const double inv = space.scalarize(back, tx);
    if (inv > opts.tolerance) report.record({"right_inverse", x, tx, inv, 0.0, inv});
  }
  return report;
}

}  // namespace coneiter
