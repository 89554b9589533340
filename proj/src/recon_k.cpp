#include "ft/recon_k.hpp"

#include <algorithm>
#include <cmath>

#include "ft/constants.hpp"

namespace ft {

namespace {

struct InconsistentObservation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace

KProbe design_k_probe(const FluxCurve& f, double j_lo, double j_hi, double T,
                      double u_tilde) {
  if (!f.concave_h1())
    throw KindMismatchError("coefficient recovery requires a concave H1 flux");
  if (!(u_tilde > f.lo()) || !(u_tilde < f.maximizer()))
    throw std::invalid_argument("probe state must lie strictly between u1 and u^m");
  if (!(j_lo < j_hi)) throw std::invalid_argument("empty target interval");
  double lambda = f.max_abs_deriv();
  KProbe p;
  p.i_lo = j_lo - lambda * T;
  p.i_hi = j_hi + lambda * T;
  p.u_tilde = u_tilde;
  p.data = Profile{{p.i_lo, p.i_hi}, {f.lo(), u_tilde, f.lo()}};
  return p;
}

double anchor_last_kappa(const FluxCurve& f, const MaskedProfile& snap,
                         double x_m, double i_hi, double tau, double u_tilde) {
  // Rightmost wave generated at x_m: the largest breakpoint past x_m whose
  // right state is still the probe plateau.
  std::optional<double> y;
  for (double z : snap.visible_breakpoints()) {
    if (z <= x_m + tol::position || z > i_hi) continue;
    if (std::abs(snap.value_right(z) - u_tilde) <= tol::state_eq) y = z;
  }
  if (!y)
    throw InconsistentObservation(
        "no wave right of the last stationary jump before the horizon");
  double sigma = (*y - x_m) / tau;
  double r = snap.value_left(*y);
  if (std::abs(r - u_tilde) <= tol::state_eq) {
    // Continuous at y: rarefaction edge moving at kappa * f'(u_tilde).
    return sigma / f.deriv(u_tilde);
  }
  // Shock (or rarefaction step): Rankine-Hugoniot with the observed states.
  return sigma * (u_tilde - r) / (f.value(u_tilde) - f.value(r));
}

KRecovery reconstruct_k(const FluxCurve& f, const ObserverFactory& make_observer,
                        double j_lo, double j_hi, double T, double u_tilde) {
  KProbe probe = design_k_probe(f, j_lo, j_hi, T, u_tilde);
  Observer obs = make_observer(probe.data);
  if (obs.partial())
    throw AccessViolation("coefficient recovery requires full observability");

  KRecovery out;
  out.tau_prime = obs.pre_interaction_time();
  const double tau = out.tau_prime;

  // Stationary jumps are detected across the whole padded interval so the
  // right-to-left chain can bridge any jumps between J and the anchor wave.
  double margin = 1e-9 * (1.0 + std::abs(probe.i_hi) + std::abs(probe.i_lo));
  out.jump_positions =
      obs.stationary_jumps(0.5 * tau, tau, probe.i_lo + margin, probe.i_hi - margin);

  MaskedProfile snap = obs.snapshot(tau);

  if (out.jump_positions.empty()) {
    // Constant coefficient: anchor on the trailing edge of the boundary fan
    // at sup I, where the plateau meets the outgoing wave.
    std::optional<double> z0;
    for (double z : snap.visible_breakpoints()) {
      if (z < probe.i_hi - margin) continue;
      if (std::abs(snap.value_left(z) - u_tilde) <= tol::state_eq) {
        z0 = z;
        break;
      }
    }
    if (!z0) throw InconsistentObservation("boundary fan not found");
    double sigma = (*z0 - probe.i_hi) / tau;
    double r = snap.value_right(*z0);
    double kap = sigma * (u_tilde - r) / (f.value(u_tilde) - f.value(r));
    out.anchor_value = kap;
    out.coeff = SpatialCoeff::constant(kap);
    return out;
  }

  double x_m = out.jump_positions.back();
  double kap = anchor_last_kappa(f, snap, x_m, probe.i_hi, tau, u_tilde);
  out.anchor_value = kap;

  // Right-to-left chain: kappa_{a-1} f(u(x_a-)) = kappa_a f(u(x_a+)).
  std::vector<double> values(out.jump_positions.size() + 1);
  values.back() = kap;
  for (std::size_t i = out.jump_positions.size(); i-- > 0;) {
    double x = out.jump_positions[i];
    double ul = snap.value_left(x);
    double ur = snap.value_right(x);
    if (f.value(ul) <= tol::rankine_hugoniot || f.value(ur) <= tol::rankine_hugoniot)
      throw InconsistentObservation(
          "vanishing flux at a stationary jump violates the probe design");
    values[i] = values[i + 1] * f.value(ur) / f.value(ul);
    out.residuals.push_back(values[i] * f.value(ul) - values[i + 1] * f.value(ur));
  }
  std::reverse(out.residuals.begin(), out.residuals.end());
  out.coeff = SpatialCoeff(out.jump_positions, values);
  return out;
}

}  // namespace ft
