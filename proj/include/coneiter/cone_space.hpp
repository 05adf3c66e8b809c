#pragma once

// Cone b,p-normed spaces over finite-dimensional cones P = R_+^k.
//
// A space is a vector space X with a cone-valued norm D : X -> P satisfying
//   (i)   D(x) = 0 iff x = 0
//   (ii)  D(x) = D(-x)
//   (iii) D(x + y) <=_P b (D(x) + D(y))
//   (iv)  D(tau x) = tau^p D(x),  tau >= 0
// The scalarized distance is Delta(x, y) = ||D(x - y)|| with the Euclidean
// norm on P, which is monotone on R_+^k and so gives normality constant 1.
//
// Note that (iv) makes Delta p-homogeneous: Delta(tau x, 0) = tau^p Delta(x, 0).

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coneiter/errors.hpp"
#include "coneiter/vector.hpp"

namespace coneiter {

/// Element of the cone R_+^k. Components are not clamped so that broken
/// norms can be detected by the axiom checker.
struct ConeValue {
  std::vector<double> components;

  [[nodiscard]] std::size_t dim() const noexcept { return components.size(); }

  /// Ambient Euclidean norm used for scalarization.
  [[nodiscard]] double norm() const noexcept { return euclidean_norm(components); }

  [[nodiscard]] bool in_cone(double tol = 0.0) const noexcept {
    for (double c : components)
      if (!(c >= -tol)) return false;
    return true;
  }

  /// Partial order u <=_P v, i.e. v - u in P.
  [[nodiscard]] bool leq(const ConeValue& other, double tol = 0.0) const {
    if (other.dim() != dim()) throw StructuralError("cone dimension mismatch");
    for (std::size_t i = 0; i < dim(); ++i)
      if (components[i] > other.components[i] + tol) return false;
    return true;
  }

  friend ConeValue operator+(ConeValue a, const ConeValue& b) {
    if (a.dim() != b.dim()) throw StructuralError("cone dimension mismatch");
    for (std::size_t i = 0; i < a.dim(); ++i) a.components[i] += b.components[i];
    return a;
  }

  friend ConeValue operator*(double s, ConeValue a) noexcept {
    for (double& c : a.components) c *= s;
    return a;
  }
};

/// Identifies how a space was built so it can be reconstructed from JSON.
struct SpaceDescriptor {
  std::string builtin = "custom";
  nlohmann::json params = nlohmann::json::object();
};

class ConeBpSpace {
public:
  using ConeNorm = std::function<ConeValue(const Vector&)>;
  using DomainPredicate = std::function<bool(const Vector&)>;

  ConeBpSpace(std::size_t dim, ConeNorm cone_norm, double b, double p, double kappa,
              DomainPredicate domain = {}, SpaceDescriptor descriptor = {})
      : dim_(dim),
        cone_norm_(std::move(cone_norm)),
        b_(b),
        p_(p),
        kappa_(kappa),
        domain_(std::move(domain)),
        descriptor_(std::move(descriptor)) {
    if (dim_ == 0) throw ParameterError("space dimension must be positive");
    if (!cone_norm_) throw ParameterError("cone norm must be callable");
    if (!(b_ >= 1.0) || !std::isfinite(b_)) throw ParameterError("b must be >= 1");
    if (!(p_ > 0.0 && p_ <= 1.0)) throw ParameterError("p must lie in (0, 1]");
    if (!(kappa_ >= 1.0) || !std::isfinite(kappa_)) throw ParameterError("kappa must be >= 1");
  }

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] double b() const noexcept { return b_; }
  [[nodiscard]] double p() const noexcept { return p_; }
  [[nodiscard]] double kappa() const noexcept { return kappa_; }
  [[nodiscard]] double kappa_b() const noexcept { return kappa_ * b_; }
  [[nodiscard]] const SpaceDescriptor& descriptor() const noexcept { return descriptor_; }

  [[nodiscard]] ConeValue cone_norm(const Vector& x) const {
    require_dim(x);
    return cone_norm_(x);
  }

  /// Delta(x, y) = ||D(x - y)||.
  [[nodiscard]] double scalarize(const Vector& x, const Vector& y) const {
    require_dim(x);
    x.require_same_dim(y, "scalarize");
    return cone_norm_(x - y).norm();
  }

  /// Delta(x, 0).
  [[nodiscard]] double magnitude(const Vector& x) const {
    require_dim(x);
    return cone_norm_(x).norm();
  }

  [[nodiscard]] bool in_domain(const Vector& x) const { return !domain_ || domain_(x); }
  [[nodiscard]] bool has_domain() const noexcept { return static_cast<bool>(domain_); }

  void require_dim(const Vector& x) const {
    if (x.dim() != dim_)
      throw StructuralError("vector of dimension " + std::to_string(x.dim()) +
                            " used in a space of dimension " + std::to_string(dim_));
  }

private:
  std::size_t dim_;
  ConeNorm cone_norm_;
  double b_;
  double p_;
  double kappa_;
  DomainPredicate domain_;
  SpaceDescriptor descriptor_;
};

inline double scalarize(const ConeBpSpace& space, const Vector& x, const Vector& y) {
  return space.scalarize(x, y);
}

/// X = R with D(x) = |x|^p; b = kappa = 1 by subadditivity of t -> t^p.
inline ConeBpSpace builtin_scalar_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("scalar_p requires p in (0, 1]");
  auto norm = [p](const Vector& x) { return ConeValue{{std::pow(std::abs(x[0]), p)}}; };
  return ConeBpSpace(1, norm, 1.0, p, 1.0, {}, {"scalar_p", {{"p", p}}});
}

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// X = R^2 with D(x) = (||x||_2, ||Ax||_2) in R_+^2; b = p = kappa = 1.
inline ConeBpSpace builtin_r2_matrix(const Matrix2& a) {
  for (const auto& row : a)
    for (double v : row)
      if (!std::isfinite(v)) throw ParameterError("r2_matrix entries must be finite");
  auto norm = [a](const Vector& x) {
    const double ax0 = a[0][0] * x[0] + a[0][1] * x[1];
    const double ax1 = a[1][0] * x[0] + a[1][1] * x[1];
    return ConeValue{{std::hypot(x[0], x[1]), std::hypot(ax0, ax1)}};
  };
  nlohmann::json params = {{"A", {{a[0][0], a[0][1]}, {a[1][0], a[1][1]}}}};
  return ConeBpSpace(2, norm, 1.0, 1.0, 1.0, {}, {"r2_matrix", std::move(params)});
}

/// Rebuilds a builtin space from its descriptor.
inline ConeBpSpace space_from_descriptor(const SpaceDescriptor& d) {
  if (d.builtin == "scalar_p") return builtin_scalar_p(d.params.value("p", 1.0));
  if (d.builtin == "r2_matrix") {
    const auto& a = d.params.at("A");
    if (!a.is_array() || a.size() != 2 || a[0].size() != 2 || a[1].size() != 2)
      throw StructuralError("r2_matrix expects a 2x2 matrix 'A'");
    return builtin_r2_matrix(
        {{{a[0][0].get<double>(), a[0][1].get<double>()},
          {a[1][0].get<double>(), a[1][1].get<double>()}}});
  }
  throw StructuralError("unknown builtin space '" + d.builtin + "'");
}

/// Parses "scalar_p:<p>" or "r2_matrix:<a11>,<a12>,<a21>,<a22>".
inline ConeBpSpace parse_space_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  std::vector<double> nums;
  std::size_t pos = 0;
  try {
    while (pos < args.size()) {
      const auto comma = args.find(',', pos);
      nums.push_back(std::stod(args.substr(pos, comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  } catch (const std::logic_error&) {
    throw StructuralError("malformed space spec '" + spec + "'");
  }
  if (name == "scalar_p") {
    return builtin_scalar_p(nums.empty() ? 1.0 : nums.at(0));
  }
  if (name == "r2_matrix") {
    if (nums.empty()) return builtin_r2_matrix({{{1.0, 0.0}, {0.0, 1.0}}});
    if (nums.size() != 4) throw StructuralError("r2_matrix spec needs 4 entries");
    return builtin_r2_matrix({{{nums[0], nums[1]}, {nums[2], nums[3]}}});
  }
  throw StructuralError("unknown space '" + name + "'");
}

inline nlohmann::json to_json(const Vector& v) { return v.raw(); }

inline Vector vector_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Vector{j.get<double>()};
  if (!j.is_array()) throw StructuralError("expected a number or an array of numbers");
  return Vector(j.get<std::vector<double>>());
}

// ---------------------------------------------------------------------------
// Axiom checking

struct Counterexample {
  nlohmann::json inputs;
  double violation = 0.0;
};

struct AxiomResult {
  std::string axiom;  // "i" | "ii" | "iii" | "iv"
  int samples = 0;
  int failures = 0;
  std::optional<Counterexample> worst;

  void record(nlohmann::json inputs, double violation) {
    ++failures;
    if (!worst || violation > worst->violation) worst = Counterexample{std::move(inputs), violation};
  }
};

struct AxiomReport {
  std::vector<AxiomResult> axioms;

  [[nodiscard]] bool passed() const {
    for (const auto& a : axioms)
      if (a.failures > 0) return false;
    return true;
  }

  [[nodiscard]] const AxiomResult& axiom(const std::string& name) const {
    for (const auto& a : axioms)
      if (a.axiom == name) return a;
    throw StructuralError("no axiom '" + name + "' in report");
  }
};

inline nlohmann::json to_json(const AxiomResult& r) {
  nlohmann::json j = {{"axiom", r.axiom}, {"samples", r.samples}, {"failures", r.failures}};
  if (r.worst)
    j["worst"] = {{"inputs", r.worst->inputs}, {"violation", r.worst->violation}};
  else
    j["worst"] = nullptr;
  return j;
}

inline nlohmann::json to_json(const AxiomReport& r) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& a : r.axioms) j.push_back(to_json(a));
  return j;
}

namespace detail {

inline double magnitude_tol(double magnitude) { return 1e-9 * (1.0 + magnitude); }

inline Vector sample_vector(std::mt19937_64& rng, std::size_t dim, double radius) {
  std::uniform_real_distribution<double> dist(-radius, radius);
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = dist(rng);
  return v;
}

// Largest amount by which a exceeds b in any component.
inline double max_excess(const ConeValue& a, const ConeValue& b) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, a.components[i] - b.components[i]);
  return worst;
}

inline double max_abs_diff(const ConeValue& a, const ConeValue& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    worst = std::max(worst, std::abs(a.components[i] - b.components[i]));
  return worst;
}

}  // namespace detail

/// Tests axioms (i)-(iv) on seeded samples drawn uniformly from [-radius, radius]^d.
/// Scalars for (iv) are drawn from [0, 4]. Violations are report content.
inline AxiomReport check_axioms(const ConeBpSpace& space, int sample_count, std::uint64_t seed,
                                double radius = 10.0) {
  if (sample_count < 1) throw ParameterError("sample_count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tau_dist(0.0, 4.0);
  const std::size_t dim = space.dim();
  const double p = space.p();
  const double b = space.b();

  AxiomResult ax1{"i", sample_count, 0, {}}, ax2{"ii", sample_count, 0, {}}, ax3{"iii", sample_count, 0, {}},
      ax4{"iv", sample_count, 0, {}};

  // D(0) = 0 is checked once as the first axiom (i) sample.
  {
    const Vector z = Vector::zero(dim);
    const ConeValue d0 = space.cone_norm(z);
    double viol = d0.norm();
    if (viol > detail::magnitude_tol(0.0) || !d0.in_cone()) ax1.record({{"x", to_json(z)}}, viol);
  }

  for (int s = 0; s < sample_count; ++s) {
    const Vector x = detail::sample_vector(rng, dim, radius);
    const Vector y = detail::sample_vector(rng, dim, radius);
    const double tau = tau_dist(rng);
    const ConeValue dx = space.cone_norm(x);
    const ConeValue dy = space.cone_norm(y);
    const double mx = dx.norm();

    if (s > 0) {
      // x != 0 almost surely: D(x) must be a nonzero cone element.
      double neg = 0.0;
      for (double c : dx.components) neg = std::max(neg, -c);
      const bool zero_for_nonzero = mx == 0.0 && euclidean_norm(x.values()) > 0.0;
      if (neg > detail::magnitude_tol(mx) || zero_for_nonzero)
        ax1.record({{"x", to_json(x)}}, zero_for_nonzero ? euclidean_norm(x.values()) : neg);
    }

    const double sym = detail::max_abs_diff(dx, space.cone_norm(-x));
    if (sym > detail::magnitude_tol(mx)) ax2.record({{"x", to_json(x)}}, sym);

    const ConeValue bound = b * (dx + dy);
    const double tri = detail::max_excess(space.cone_norm(x + y), bound);
    if (tri > detail::magnitude_tol(bound.norm()))
      ax3.record({{"x", to_json(x)}, {"y", to_json(y)}}, tri);

    const double hom = detail::max_abs_diff(space.cone_norm(tau * x), std::pow(tau, p) * dx);
    if (hom > detail::magnitude_tol(mx))
      ax4.record({{"x", to_json(x)}, {"tau", tau}}, hom);
  }
  return AxiomReport{{ax1, ax2, ax3, ax4}};
}

}  // namespace coneiter
