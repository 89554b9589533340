#pragma once

#include <stdexcept>
#include <vector>

namespace ft {

/// Piecewise-constant positive coefficient k(x): strictly increasing
/// breakpoints, one value per cell, the outermost values extending to
/// +/- infinity. Adjacent values must differ (jumps are real).
class SpatialCoeff {
 public:
  SpatialCoeff() : values_{1.0} {}
  SpatialCoeff(std::vector<double> breakpoints, std::vector<double> values);

  static SpatialCoeff constant(double k) { return SpatialCoeff({}, {k}); }

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }

  double value_left(double x) const;   // k(x-)
  double value_right(double x) const;  // k(x+)
  double max_value() const;
  double min_value() const;

  bool operator==(const SpatialCoeff&) const = default;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;  // breaks_.size() + 1 entries
};

/// A single obstruction inside a window [a,b]: ambient coefficient k_o
/// outside (xi1, xi2), reduced value k1 inside.
struct Obstruction {
  double k1 = 0.0;
  double xi1 = 0.0, xi2 = 0.0;
  double k_ambient = 1.0;
  double a = 0.0, b = 0.0;

  void validate() const {
    if (!(k1 > 0.0) || !(k1 < k_ambient))
      throw std::invalid_argument("obstruction requires 0 < k1 < ambient");
    if (!(a <= xi1) || !(xi1 < xi2) || !(xi2 <= b))
      throw std::invalid_argument("obstruction requires a <= xi1 < xi2 <= b");
  }

  SpatialCoeff coefficient() const {
    validate();
    return SpatialCoeff({xi1, xi2}, {k_ambient, k1, k_ambient});
  }
};

}  // namespace ft
