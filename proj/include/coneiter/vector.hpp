#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "coneiter/errors.hpp"

namespace coneiter {

/// Dense element of a finite-dimensional real vector space.
class Vector {
public:
  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0) : data_(dim, fill) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  static Vector zero(std::size_t dim) { return Vector(dim, 0.0); }

  [[nodiscard]] std::size_t dim() const noexcept { return data_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  [[nodiscard]] std::span<const double> values() const noexcept { return data_; }
  [[nodiscard]] const std::vector<double>& raw() const noexcept { return data_; }

  [[nodiscard]] auto begin() const noexcept { return data_.begin(); }
  [[nodiscard]] auto end() const noexcept { return data_.end(); }

  [[nodiscard]] bool all_finite() const noexcept {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  Vector& operator+=(const Vector& rhs) {
    require_same_dim(rhs, "+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
  }

  Vector& operator-=(const Vector& rhs) {
    require_same_dim(rhs, "-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
  }

  Vector& operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
  friend Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
  friend Vector operator*(Vector v, double s) noexcept { return v *= s; }
  friend Vector operator*(double s, Vector v) noexcept { return v *= s; }
  friend Vector operator-(Vector v) noexcept { return v *= -1.0; }

  friend bool operator==(const Vector&, const Vector&) = default;

  void require_same_dim(const Vector& other, const char* op) const {
    if (other.dim() != dim())
      throw StructuralError(std::string("dimension mismatch in '") + op + "': " +
                            std::to_string(dim()) + " vs " + std::to_string(other.dim()));
  }

private:
  std::vector<double> data_;
};

/// Euclidean norm of a component span.
inline double euclidean_norm(std::span<const double> v) noexcept {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

/// Componentwise closeness with a relative tolerance.
inline bool approx_equal(const Vector& a, const Vector& b, double rel_tol = 1e-12) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
    if (std::abs(a[i] - b[i]) > rel_tol * scale) return false;
  }
  return true;
}

}  // namespace coneiter
