#include "ft/spatial_coeff.hpp"

#include <algorithm>

namespace ft {

SpatialCoeff::SpatialCoeff(std::vector<double> breakpoints,
                           std::vector<double> values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.size() != breaks_.size() + 1)
    throw std::invalid_argument("SpatialCoeff: need one value per cell");
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i] > breaks_[i - 1]))
      throw std::invalid_argument("SpatialCoeff: breakpoints must increase strictly");
  for (double v : values_)
    if (!(v > 0.0)) throw std::invalid_argument("SpatialCoeff: values must be positive");
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (values_[i] == values_[i - 1])
      throw std::invalid_argument("SpatialCoeff: adjacent cell values must differ");
}

double SpatialCoeff::value_left(double x) const {
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

double SpatialCoeff::value_right(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

double SpatialCoeff::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double SpatialCoeff::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

}  // namespace ft
