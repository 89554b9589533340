#pragma once

#include <functional>

#include "ft/observe.hpp"
#include "ft/spatial_coeff.hpp"

namespace ft {

/// Initial data for the coefficient-recovery probe: the plateau value
/// u_tilde on the influence-padded interval I, the zero-flux state outside.
struct KProbe {
  Profile data;
  double i_lo, i_hi;
  double u_tilde;
};

/// Probe design for recovering k on [j_lo, j_hi] within horizon T. The
/// padding lambda*T guarantees boundary waves cannot reach J before T.
KProbe design_k_probe(const FluxCurve& f, double j_lo, double j_hi, double T,
                      double u_tilde);

struct KRecovery {
  SpatialCoeff coeff;                  // on J; ambient cells extend outward
  double tau_prime = 0.0;              // pre-interaction observation time
  std::vector<double> jump_positions;  // detected stationary jumps
  std::vector<double> residuals;       // flux-matching residual per jump
  double anchor_value = 0.0;           // kappa_M from the rightmost wave
};

/// Builds an observer for a chosen initial datum (the underlying coefficient
/// stays hidden behind the observation interface).
using ObserverFactory = std::function<Observer(const Profile&)>;

/// Pre-interaction time, stationary-jump detection, rightmost-wave anchor
/// and the right-to-left flux-matching chain, assembled into the coefficient
/// on [j_lo, j_hi].
KRecovery reconstruct_k(const FluxCurve& f, const ObserverFactory& make_observer,
                        double j_lo, double j_hi, double T, double u_tilde);

/// Anchor step alone (exposed for tests): recover the coefficient right of
/// x_m from the rightmost wave it generated, observed at time tau.
double anchor_last_kappa(const FluxCurve& f, const MaskedProfile& snap,
                         double x_m, double i_hi, double tau, double u_tilde);

}  // namespace ft
