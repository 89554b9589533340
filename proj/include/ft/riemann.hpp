#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ft/flux_curve.hpp"

namespace ft {

struct Shock {
  double u_left, u_right, speed;
};

/// Centered rarefaction at constant coefficient k; states traverse from
/// u_left to u_right with characteristic speed k*f'(u) increasing across
/// the wave.
struct Rarefaction {
  double u_left, u_right, k;
};

/// Stationary jump where the coefficient changes; k_l f(u_l) = k_r f(u_r).
struct KWave {
  double k_left, k_right, u_left, u_right;
};

using Wave = std::variant<Shock, Rarefaction, KWave>;

double wave_speed_lo(const Wave& w, const FluxCurve& f);
double wave_speed_hi(const Wave& w, const FluxCurve& f);

/// Self-similar solution of a Riemann problem: ordered waves chaining the
/// left state (u_left,k_left) to the right state (u_right,k_right).
struct WaveFan {
  double u_left, k_left;
  double u_right, k_right;
  std::vector<Wave> waves;

  /// Sample at similarity ratio xi = x/t. On a discontinuity the side
  /// selected by `from_left` is returned.
  double sample(const FluxCurve& f, double xi, bool from_left = true) const;
  double coeff_at(double xi, bool from_left = true) const;

  /// Checks state chaining, Lax speed ordering, Rankine-Hugoniot residuals
  /// and flux continuity at xi=0. Returns an error description, or nullopt
  /// if all invariants hold.
  std::optional<std::string> invariant_violation(const FluxCurve& f) const;
};

/// Entropy solution of the single-coefficient Riemann problem, built from
/// the convex (u_left < u_right) or concave (u_left > u_right) envelope of
/// k*f between the states. Equal states give an empty fan.
WaveFan solve_homogeneous(const FluxCurve& f, double k, double u_left,
                          double u_right);

enum class PartnerBranch { Increasing, Decreasing };
struct StationaryPartner {
  double state;
  PartnerBranch branch;
};

/// All states u' with k_from f(u) = k_to f(u') (at most two, tagged by
/// branch). Empty when the required flux level exceeds k_to * max f.
std::vector<StationaryPartner> stationary_partners(const FluxCurve& f,
                                                   double k_from, double u,
                                                   double k_to);

/// Riemann solver for two coefficient values (concave H1 flux), following
/// the four-case construction with the smallest-jump condition at the
/// stationary wave. k_left == k_right delegates to solve_homogeneous.
WaveFan solve_two_k(const FluxCurve& f, double k_left, double u_left,
                    double k_right, double u_right);

}  // namespace ft
