#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ft/flux_curve.hpp"
#include "ft/front_tracking.hpp"
#include "ft/riemann.hpp"

namespace ft {

/// Dyadic reconstruction grid on [u_lo, u_hi]: 2^nu intervals of width
/// delta, anchor value c = f(u_lo), single observation time T.
struct ReconGrid {
  double u_lo, u_hi;
  int nu;
  double anchor_c = 0.0;
  double T = 1.0;

  double delta() const { return (u_hi - u_lo) / double(1 << nu); }
  std::vector<double> nodes() const;
};

/// Monotone single-time snapshot of one Riemann solution, reduced to the
/// features the reconstruction needs: jump locations with adjacent states,
/// and smooth arcs carrying their exact integral of u dx.
struct RiemannSnapshot {
  struct Jump {
    double x;
    double v_left, v_right;
  };
  struct Arc {
    double x_lo, x_hi;
    double u_lo, u_hi;
    double integral_u_dx;
  };
  std::vector<Jump> jumps;  // sorted by x
  std::vector<Arc> arcs;    // sorted by x

  void validate_monotone(double u_left, double u_right) const;
};

/// Exact snapshot of a self-similar fan at time T (arc integrals in closed
/// form via the area identity).
RiemannSnapshot snapshot_from_fan(const FluxCurve& f, const WaveFan& fan, double T);
/// Snapshot from a piecewise-constant profile (front-tracking output): every
/// breakpoint becomes a jump; staircases need no smoothing.
RiemannSnapshot snapshot_from_profile(const Profile& p);

/// Produces the observation for the Riemann datum (u_lo | u_hi) at time T.
using RiemannOracle =
    std::function<RiemannSnapshot(double u_lo, double u_hi, double T)>;

enum class StepKind { Shock, Rarefaction, General };

struct StepResult {
  double f_next;
  StepKind kind;
  /// Interior plateau values with their reconstructed flux values (the
  /// telescoping byproduct of the general step).
  std::vector<std::pair<double, double>> interior;
};

/// Single-shock step: f(u_{h+1}) = f(u_h) + delta * x_jump / T.
StepResult shock_step(const RiemannSnapshot& s, double f_h, double delta, double T);
/// Single-rarefaction step via the equivalent-jump location.
StepResult rarefaction_step(const RiemannSnapshot& s, double f_h, double delta,
                            double T);
/// General monotone snapshot: every arc is replaced by its equivalent jump,
/// then the weighted jump-location sum advances the flux value.
StepResult general_step(const RiemannSnapshot& s, double f_h, double delta,
                        double T);

struct NodeReport {
  double u, f;
  StepKind kind;
};

struct FluxReconstruction {
  FluxCurve flux;  // piecewise-linear interpolant of the nodes
  std::vector<NodeReport> nodes;
  /// Interior values discovered inside general steps, merged into the node
  /// list of `flux` but reported separately as well.
  std::vector<std::pair<double, double>> interior_nodes;
  /// Estimated sup bound for |f_nu' - f'|: Lip(f') * delta.
  double derivative_bound(double lip_fprime) const;
  /// Lip(f') estimated from consecutive reconstructed slopes.
  double lip_fprime_estimate = 0.0;
  double delta = 0.0;
  std::vector<std::string> gaps;  // intervals whose observation failed
};

FluxReconstruction reconstruct_flux(const ReconGrid& grid, const RiemannOracle& oracle);

/// Re-runs the construction at resolution nu_fine only on the flagged
/// coarse intervals (those whose snapshots contained shocks unless the
/// caller flags otherwise); other intervals keep their coarse nodes.
FluxReconstruction refine_flux(const ReconGrid& grid,
                               const FluxReconstruction& coarse, int nu_fine,
                               const std::vector<int>& flagged_intervals,
                               const RiemannOracle& oracle);

}  // namespace ft
