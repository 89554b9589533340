#pragma once

#include <vector>

#include "ft/flux_curve.hpp"
#include "ft/front_tracking.hpp"
#include "ft/spatial_coeff.hpp"

namespace ft {

/// Base configurations for the indistinguishable-coefficient families: an
/// ambient value k_o outside [xi, xi + sum(chi_i)] and the listed values on
/// consecutive spans of lengths chi_i.
struct SpanCoeff {
  double k_ambient;
  double xi;                   // left end of the modified region
  std::vector<double> chi;     // span lengths
  std::vector<double> values;  // one per span, each < k_ambient ordering per family

  SpatialCoeff coefficient() const;
  double transit_sum() const;  // sum chi_i / k_i over the spans
};

/// Widened family: the last span grows by eps and its value moves to
/// k_eps = (chi2+eps) / (chi2/k2 + eps/k_o), preserving the transit sum.
SpanCoeff widen_family(const SpanCoeff& base, double eps, double window_hi);

/// Shifted family: the first span shrinks by rho, the second grows, with
/// k_rho = (chi2+rho) / (chi2/k2 + rho/k1); support length unchanged.
SpanCoeff shift_family(const SpanCoeff& base, double rho);

struct MergeResult {
  double ell;        // merged value of spans 2 and 3
  double ell_prime;  // single-obstruction collapse of all three spans
  SpanCoeff merged;       // spans 2,3 fused at value ell
  SpanCoeff single;       // one span at value ell_prime
};

/// Three-span base (k1 < k2 < k3 < k_o): harmonic merges that preserve the
/// transit sum, down to a two-jump coefficient.
MergeResult merge_family(const SpanCoeff& base);

/// Swapped middle spans of a three-span base: identical transit sum.
SpanCoeff swap_family(const SpanCoeff& base);

struct IndistinguishabilityReport {
  double deviation_l1;   // time-integrated trace distance at both probes
  double deviation_sup;  // largest pointwise trace distance
  bool indistinguishable;
};

/// Simulates both coefficients with the same data (the zero-flux state right
/// of `a`, caller-chosen data to the left) and compares the traces just
/// outside the window.
IndistinguishabilityReport indistinguishable(const FluxCurve& f,
                                             const SpatialCoeff& coeff_a,
                                             const SpatialCoeff& coeff_b,
                                             double a, double b,
                                             const Profile& data, double T,
                                             double delta, double threshold);

}  // namespace ft
