#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coneiter/errors.hpp"

namespace coneiter {

/// A real sequence indexed by n >= 1: a constant, a table (the last entry
/// repeats past its end) or a pure rule n -> value.
class Schedule {
public:
  enum class Kind { Constant, Table, Rule };

  Schedule() = default;

  static Schedule constant(double v) {
    Schedule s;
    s.kind_ = Kind::Constant;
    s.constant_ = v;
    return s;
  }

  static Schedule table(std::vector<double> values) {
    if (values.empty()) throw ParameterError("schedule table must be nonempty");
    Schedule s;
    s.kind_ = Kind::Table;
    s.table_ = std::move(values);
    return s;
  }

  static Schedule rule(std::function<double(int)> fn, std::string label = "rule") {
    if (!fn) throw ParameterError("schedule rule must be callable");
    Schedule s;
    s.kind_ = Kind::Rule;
    s.rule_ = std::move(fn);
    s.label_ = std::move(label);
    return s;
  }

  [[nodiscard]] Kind kind() const noexcept { return kind_; }

  [[nodiscard]] double operator()(int n) const {
    switch (kind_) {
      case Kind::Constant: return constant_;
      case Kind::Table:
        return table_[static_cast<std::size_t>(std::clamp(n - 1, 0, static_cast<int>(table_.size()) - 1))];
      case Kind::Rule: return rule_(n);
    }
    return constant_;
  }

  [[nodiscard]] double supremum(int n_max) const {
    double s = -std::numeric_limits<double>::infinity();
    for (int n = 1; n <= std::max(n_max, 1); ++n) s = std::max(s, (*this)(n));
    return s;
  }

  [[nodiscard]] double infimum(int n_max) const {
    double s = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= std::max(n_max, 1); ++n) s = std::min(s, (*this)(n));
    return s;
  }

  /// Constants serialize as numbers; tables and rules as the values for n = 1..n_max.
  [[nodiscard]] nlohmann::json to_json(int n_max) const {
    if (kind_ == Kind::Constant) return constant_;
    if (kind_ == Kind::Table) return table_;
    std::vector<double> vals;
    for (int n = 1; n <= n_max; ++n) vals.push_back(rule_(n));
    return vals;
  }

  static Schedule from_json(const nlohmann::json& j) {
    if (j.is_number()) return constant(j.get<double>());
    if (j.is_array()) return table(j.get<std::vector<double>>());
    throw StructuralError("schedule must be a number or an array of numbers");
  }

private:
  Kind kind_ = Kind::Constant;
  double constant_ = 0.0;
  std::vector<double> table_;
  std::function<double(int)> rule_;
  std::string label_;
};

}  // namespace coneiter
