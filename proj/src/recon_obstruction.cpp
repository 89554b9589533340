#include "ft/recon_obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ft/constants.hpp"

namespace ft {

namespace {

// State inside the centered fan (origin x_c) climbing from u_base to u^m:
// solves k_o f'(eta) = (x - x_c) / t on [u_base, u^m].
double fan_state(const FluxCurve& f, double k_o, double x_c, double u_base,
                 double t, double x) {
  double target = (x - x_c) / (k_o * t);
  double lo = u_base, hi = f.maximizer();
  if (target >= f.deriv(lo)) return lo;
  if (target <= f.deriv(hi)) return hi;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    double m = 0.5 * (lo + hi);
    if (f.deriv(m) > target)
      lo = m;
    else
      hi = m;
  }
  return 0.5 * (lo + hi);
}

// Backward generalized characteristic through the known fan: integrates
// xi' = k_o (f(eta) - f(w')) / (eta - w') from (tau_a, a) down to tau_end.
// Adaptive Runge-Kutta-Fehlberg 4(5) with step rejection; the integrand is
// smooth away from tau_end, where the path meets the fan boundary.
double backward_characteristic(const FluxCurve& f, double k_o, double x_c,
                               double u_base, double w_prime, double a,
                               double tau_a, double tau_end) {
  auto rhs = [&](double t, double xi) {
    double eta = fan_state(f, k_o, x_c, u_base, t, xi);
    double den = eta - w_prime;
    if (std::abs(den) < 1e-14) return 0.0;
    return k_o * (f.value(eta) - f.value(w_prime)) / den;
  };
  if (tau_end >= tau_a) return a;

  double t = tau_a;
  double y = a;
  double h = -(tau_a - tau_end) / 64.0;
  const double hmin = -(tau_a - tau_end);
  int guard = 0;
  while (t > tau_end + 1e-15 && ++guard < 100000) {
    if (t + h < tau_end) h = tau_end - t;
    // RKF45 coefficients.
    double k1 = rhs(t, y);
    double k2 = rhs(t + h / 4.0, y + h * k1 / 4.0);
    double k3 = rhs(t + 3.0 * h / 8.0, y + h * (3.0 * k1 + 9.0 * k2) / 32.0);
    double k4 = rhs(t + 12.0 * h / 13.0,
                    y + h * (1932.0 * k1 - 7200.0 * k2 + 7296.0 * k3) / 2197.0);
    double k5 = rhs(t + h, y + h * (439.0 / 216.0 * k1 - 8.0 * k2 +
                                    3680.0 / 513.0 * k3 - 845.0 / 4104.0 * k4));
    double k6 = rhs(t + h / 2.0,
                    y + h * (-8.0 / 27.0 * k1 + 2.0 * k2 - 3544.0 / 2565.0 * k3 +
                             1859.0 / 4104.0 * k4 - 11.0 / 40.0 * k5));
    double y4 = y + h * (25.0 / 216.0 * k1 + 1408.0 / 2565.0 * k3 +
                         2197.0 / 4104.0 * k4 - k5 / 5.0);
    double y5 = y + h * (16.0 / 135.0 * k1 + 6656.0 / 12825.0 * k3 +
                         28561.0 / 56430.0 * k4 - 9.0 / 50.0 * k5 + 2.0 / 55.0 * k6);
    double err = std::abs(y5 - y4);
    const double tolerance = 1e-13 * (1.0 + std::abs(y));
    if (err <= tolerance || std::abs(h) <= std::abs(hmin) * 1e-12) {
      t += h;
      y = y5;
    }
    double scale = (err > 0.0) ? 0.9 * std::pow(tolerance / err, 0.2) : 2.0;
    scale = std::clamp(scale, 0.2, 2.0);
    h *= scale;
    if (t + h < tau_end) h = tau_end - t;
  }
  return y;
}

ObstructionResult failure(ObstructionStatus st, std::string note,
                          const ObstructionIntermediates& mid = {}) {
  ObstructionResult r;
  r.status = st;
  r.note = std::move(note);
  r.mid = mid;
  return r;
}

constexpr double kCongestionTol = 1e-9;

}  // namespace

StationaryProbe probe_stationary(const FluxCurve& f, const StationaryAmbient& amb,
                                 double x_tilde) {
  if (!f.concave_h1())
    throw KindMismatchError("obstruction recovery requires a concave H1 flux");
  if (!(x_tilde > 0.0)) throw std::invalid_argument("x_tilde must be positive");
  const double u1 = f.lo(), u2 = f.hi(), um = f.maximizer();
  if (std::abs(amb.u_oa - um) <= tol::state_eq)
    throw std::invalid_argument(
        "ambient state at the maximizer: the coefficient is ambient everywhere");
  StationaryProbe p;
  p.x_tilde = x_tilde;
  p.u_base = u1;
  if (amb.u_oa > u1 + tol::state_eq && amb.u_oa < u2 - tol::state_eq) {
    p.v_bar_a = f.companion(amb.u_oa);
    double M = std::max(amb.u_oa, p.v_bar_a);
    p.y_tilde = (M - u1) / f.value(amb.u_oa) * f.deriv(u1) * (amb.b - amb.a + x_tilde);
  } else {
    p.v_bar_a = f.companion(amb.u_oa);
    p.y_tilde = 0.0;
  }
  p.fan_center = amb.a - x_tilde - p.y_tilde;
  if (p.y_tilde > 0.0) {
    p.left_data = Profile{{p.fan_center, amb.a - x_tilde},
                          {um, u1, amb.u_oa}};
  } else {
    p.left_data = Profile{{amb.a - x_tilde}, {um, amb.u_oa}};
  }
  return p;
}

StationaryProbe probe_fast(const FluxCurve& f, const StationaryAmbient& amb,
                           double x_tilde) {
  if (!f.concave_h1())
    throw KindMismatchError("obstruction recovery requires a concave H1 flux");
  const double um = f.maximizer();
  if (!(std::max(amb.u_oa, amb.u_ob) < um))
    throw std::invalid_argument("fast probe requires ambient states below the maximizer");
  StationaryProbe p;
  p.x_tilde = x_tilde;
  p.y_tilde = 0.0;
  p.v_bar_a = f.companion(amb.u_oa);
  p.u_base = amb.u_oa;
  p.fan_center = amb.a - x_tilde;
  p.left_data = Profile{{p.fan_center}, {um, amb.u_oa}};
  return p;
}

namespace {

// Shared second stage: once the stretch up to the obstruction carries the
// plateau u_base and the fan (centered at x_c) is climbing from u_base to
// u^m, read off the arrivals and invert them.
ObstructionResult recover_from_fan(const FluxCurve& f, const StationaryAmbient& amb,
                                   const StationaryProbe& probe, const Observer& obs,
                                   double tau_start, ObstructionIntermediates mid) {
  const double u2 = f.hi(), um = f.maximizer();
  const double k_o = amb.k_o, a = amb.a, b = amb.b;
  const double u_base = probe.u_base;

  // First fan state reaching a, then b.
  auto above_base = [&](double u) { return u > u_base + tol::state_eq; };
  auto arr_o = obs.first_arrival(a, above_base, tau_start);
  if (!arr_o)
    return failure(ObstructionStatus::HorizonTooShort,
                   "fan never showed up at the left end of the window", mid);
  mid.tau_o = arr_o->time;

  auto arr_b = obs.first_arrival(b, above_base, tau_start);
  if (!arr_b)
    return failure(ObstructionStatus::HorizonTooShort,
                   "no transmitted wave reached the right end of the window", mid);
  mid.tau_b = arr_b->time;

  // Any right-end arrival before the probe fan has even reached the window
  // entry means state was stored inside at t=0 and is draining out: with a
  // zero-flux ambient that only a saturated stretch can hide.
  if (mid.tau_b <= mid.tau_o)
    return failure(ObstructionStatus::CongestionDetected,
                   "stored state drained from the hidden stretch ahead of the probe",
                   mid);

  auto arr_a = obs.first_arrival(a, [&](double u) { return u > um + tol::state_eq; },
                                 tau_start);
  if (!arr_a)
    return failure(ObstructionStatus::HorizonTooShort,
                   "no reflected wave reached the left end of the window", mid);
  mid.tau_a = arr_a->time;
  mid.v = arr_a->u_left;
  mid.w_prime = arr_a->u_right;

  if (mid.w_prime >= u2 - kCongestionTol)
    return failure(ObstructionStatus::CongestionDetected,
                   "the forbidden saturated state surfaced at the left end", mid);

  // Returning-sweep guard: when the ambient entry state sits on the falling
  // branch, the trailing fan eventually catches the exiting sweep beyond b
  // and pushes it back through the window. That returning front carries the
  // ambient flux level; a genuine reflection born at the first jump carries
  // the reduced capacity level instead.
  if (mid.w_prime > um &&
      std::abs(f.value(mid.w_prime) - f.value(amb.u_oa)) <= 1e-7 &&
      amb.u_oa > um)
    return failure(ObstructionStatus::Inconsistent,
                   "the emptying sweep returned through the window before any "
                   "reflection: entry states above capacity defeat this probe",
                   mid);

  double k1 = k_o * f.value(mid.w_prime) / f.max_value();
  if (!(k1 > 0.0) || !(k1 < k_o * (1.0 + 1e-12)))
    return failure(ObstructionStatus::Inconsistent,
                   "reflected state incompatible with a reduced coefficient", mid);
  k1 = std::min(k1, k_o * (1.0 - 1e-15));

  // Width from the fan-edge transit balance.
  mid.omega = f.branch_inverse(k_o * f.value(u_base) / k1, Branch::Increasing);
  double lam_o = k_o * f.deriv(u_base);
  double lam_1 = k1 * f.deriv(mid.omega);
  if (std::abs(lam_o - lam_1) < 1e-13)
    return failure(ObstructionStatus::Inconsistent,
                   "edge speeds coincide: transit balance is degenerate", mid);
  double width = (k_o * k1 * f.deriv(mid.omega)) / (lam_o - lam_1) *
                 ((mid.tau_b - mid.tau_o) * f.deriv(u_base) - (b - a) / k_o);

  // Generation point of the reflected shock. The reflection is born when
  // the first fan step whose level exceeds the reduced capacity reaches the
  // jump; with a step-discretized fan that front travels at the chord speed
  // of its own step, which the probe's resolution determines exactly.
  mid.w = f.branch_inverse(f.value(mid.w_prime), Branch::Increasing);
  double xi1;
  double x_c = probe.fan_center;
  double birth_speed = f.deriv(mid.w);
  {
    double um_ = f.maximizer();
    double dres = obs.scenario().delta;
    int n = std::max(1, static_cast<int>(std::ceil((um_ - u_base) / dres - 1e-9)));
    double step = (um_ - u_base) / n;
    double level = f.value(mid.w);
    int j = 1;
    while (j < n && f.value(u_base + j * step) <= level + 1e-15) ++j;
    double s_hi = u_base + j * step, s_lo = s_hi - step;
    birth_speed = (f.value(s_hi) - f.value(s_lo)) / (s_hi - s_lo);
  }
  auto chi = [&](double cand) {
    double tau_bar = (cand - x_c) / (k_o * birth_speed);
    double xi_end = backward_characteristic(f, k_o, x_c, u_base, mid.w_prime, a,
                                            mid.tau_a, tau_bar);
    return cand - xi_end;
  };
  double upper = std::min(b, x_c + k_o * birth_speed * mid.tau_a);
  double chi_lo = chi(a);
  double chi_hi = chi(upper);
  if (chi_lo >= -1e-12) {
    xi1 = a;
  } else if (chi_hi <= 0.0) {
    char diag[160];
    std::snprintf(diag, sizeof(diag),
                  "no sign change for the generation point: chi(%.6g)=%.6g, "
                  "chi(%.6g)=%.6g",
                  a, chi_lo, upper, chi_hi);
    return failure(ObstructionStatus::Inconsistent, diag, mid);
  } else {
    double lo = a, hi = upper;
    for (int i = 0; i < 100 && hi - lo > 1e-13; ++i) {
      double m = 0.5 * (lo + hi);
      if (chi(m) < 0.0)
        lo = m;
      else
        hi = m;
    }
    xi1 = 0.5 * (lo + hi);
  }

  double xi2 = xi1 + width;
  if (!(width > 0.0) || xi2 > b + 1e-6)
    return failure(ObstructionStatus::Inconsistent,
                   "recovered width incompatible with the window", mid);
  xi2 = std::min(xi2, b);

  ObstructionResult r;
  r.status = ObstructionStatus::Ok;
  r.obstruction = Obstruction{k1, xi1, xi2, k_o, a, b};
  r.unique = true;
  r.mid = mid;
  return r;
}

}  // namespace

ObstructionResult reconstruct_stationary(const FluxCurve& f,
                                         const StationaryAmbient& amb,
                                         double x_tilde,
                                         const PartialObserverFactory& factory) {
  const double u1 = f.lo(), u2 = f.hi();
  ObstructionIntermediates mid;
  if (amb.u_oa >= u2 - tol::state_eq || amb.u_ob >= u2 - tol::state_eq)
    return failure(ObstructionStatus::CongestionDetected,
                   "saturated ambient state: the reduced value cannot be told apart",
                   mid);
  // Stationarity ties the two visible plateaus through the flux level.
  if (std::abs(f.value(amb.u_oa) - f.value(amb.u_ob)) > 1e-9)
    return failure(ObstructionStatus::Inconsistent,
                   "ambient plateaus do not share a flux level: the data is not "
                   "stationary",
                   mid);

  StationaryProbe probe = probe_stationary(f, amb, x_tilde);
  mid.x_tilde = probe.x_tilde;
  mid.y_tilde = probe.y_tilde;
  mid.v_bar_a = probe.v_bar_a;
  Observer obs = factory(probe.left_data);

  // Emptying stage: wait until the sweep reaches b.
  double tau_tilde = 0.0;
  if (amb.u_oa > u1 + tol::state_eq) {
    auto empty = obs.trace(amb.b).first_entry_after(
        0.0, [&](double l, double r) {
          return std::abs(l - u1) <= tol::state_eq && std::abs(r - u1) <= tol::state_eq;
        });
    // Congestion watch: the saturated state at the window entry.
    auto congested = obs.trace(amb.a).first_entry_after(
        0.0, [&](double, double r) { return r >= u2 - kCongestionTol; });
    if (congested &&
        (!empty || obs.trace(amb.b).entries[*empty].t >
                       obs.trace(amb.a).entries[*congested].t))
      return failure(ObstructionStatus::CongestionDetected,
                     "saturated state reached the window entry during the sweep", mid);
    if (!empty)
      return failure(ObstructionStatus::HorizonTooShort,
                     "the sweeping wave never cleared the window", mid);
    tau_tilde = obs.trace(amb.b).entries[*empty].t;
    double M = std::max(amb.u_oa, probe.v_bar_a);
    double bound = (M - u1) / (amb.k_o * f.value(amb.u_oa)) * (amb.b - amb.a + x_tilde);
    if (tau_tilde > bound * (1.0 + 1e-6) + 1e-9)
      return failure(ObstructionStatus::Inconsistent,
                     "sweep slower than its speed bracket allows", mid);
  } else {
    // Already at the zero-flux state: if a saturated stretch hides inside,
    // the reflected wave will surface it; recover_from_fan checks for it.
    tau_tilde = 0.0;
  }
  mid.tau_tilde = tau_tilde;
  return recover_from_fan(f, amb, probe, obs, tau_tilde, mid);
}

FastOutcome reconstruct_fast(const FluxCurve& f, const StationaryAmbient& amb,
                             double x_tilde, const PartialObserverFactory& factory) {
  FastOutcome out;
  StationaryProbe probe = probe_fast(f, amb, x_tilde);
  Observer obs = factory(probe.left_data);
  ObstructionIntermediates mid;
  mid.x_tilde = probe.x_tilde;
  mid.v_bar_a = probe.v_bar_a;

  // A shock surfacing at `a` with the ambient flux level means the stretch
  // was congested all along: restart with the emptying probe.
  const double um = f.maximizer();
  auto suspicious = obs.first_arrival(
      amb.a,
      [&](double u) {
        return u > um + tol::state_eq &&
               std::abs(f.value(u) - f.value(amb.u_oa)) <= 1e-7;
      },
      0.0);
  if (suspicious) {
    out.restarted = true;
    out.result = reconstruct_stationary(f, amb, x_tilde, factory);
    return out;
  }
  out.result = recover_from_fan(f, amb, probe, obs, 0.0, mid);
  return out;
}

ObstructionResult reconstruct_stationary_extrapolated(
    const FluxCurve& f, const StationaryAmbient& amb, double x_tilde,
    const std::function<Observer(const Profile&, double delta)>& factory,
    double delta) {
  auto run = [&](double d) {
    return reconstruct_stationary(
        f, amb, x_tilde, [&](const Profile& p) { return factory(p, d); });
  };
  ObstructionResult r1 = run(delta);
  if (!r1.ok()) return r1;
  ObstructionResult r2 = run(0.5 * delta);
  if (!r2.ok()) return r2;
  ObstructionResult r4 = run(0.25 * delta);
  if (!r4.ok()) return r4;
  ObstructionResult r = r4;
  // The backward-traced first jump is quantization-limited but unbiased, so
  // the finest run is kept as is. The width rides on arrival times with a
  // clean O(delta) bias: a three-resolution fit removes it.
  auto extrap = [](double p1, double p2, double p4) {
    return (8.0 * p4 - 6.0 * p2 + p1) / 3.0;
  };
  double w1 = r1.obstruction.xi2 - r1.obstruction.xi1;
  double w2 = r2.obstruction.xi2 - r2.obstruction.xi1;
  double w4 = r4.obstruction.xi2 - r4.obstruction.xi1;
  r.obstruction.k1 =
      extrap(r1.obstruction.k1, r2.obstruction.k1, r4.obstruction.k1);
  r.obstruction.xi1 = r4.obstruction.xi1;
  r.obstruction.xi2 = r4.obstruction.xi1 + extrap(w1, w2, w4);
  r.obstruction.xi1 = std::clamp(r.obstruction.xi1, amb.a, amb.b);
  r.obstruction.xi2 = std::clamp(r.obstruction.xi2, r.obstruction.xi1, amb.b);
  r.note = "width extrapolated from three resolutions";
  return r;
}

// ---------------------------------------------------------------------------
// Constant-data problem

ConstantClassification classify_constant_case(const Observer& obs, double u_bar,
                                              double a, double b) {
  ConstantClassification c;
  const double um_margin = 1e-9;
  c.at_b = obs.first_arrival(b, [&](double u) { return u < u_bar - um_margin; }, 0.0);
  c.at_a = obs.first_arrival(a, [&](double u) { return u > u_bar + um_margin; }, 0.0);
  if (c.at_a)
    c.kind = ConstantCase::Reflective;
  else if (c.at_b)
    c.kind = ConstantCase::Transmissive;
  else
    c.kind = ConstantCase::Invisible;
  return c;
}

namespace {

ObstructionResult constant_reflective(const FluxCurve& f, double k_o, double a,
                                      double b, double u_bar, double T1, double v_o,
                                      double sigma_a, double T2, double v_1,
                                      double sigma_b,
                                      ObstructionIntermediates mid) {
  mid.T1 = T1;
  mid.T2 = T2;
  mid.v_o = v_o;
  mid.v_1 = v_1;
  mid.sigma_a = sigma_a;
  mid.sigma_b = sigma_b;
  if (!(sigma_a < 0.0))
    return failure(ObstructionStatus::Inconsistent,
                   "a reflected shock must travel backward", mid);
  if (!(sigma_b > 0.0))
    return failure(ObstructionStatus::Inconsistent,
                   "a transmitted shock must travel forward", mid);

  double k1 = k_o * f.value(v_o) / f.max_value();
  double xi1 = a - sigma_a * T1;
  double xi2_direct = b - sigma_b * T2;
  mid.xi2_direct = xi2_direct;

  // Interaction check: has the observed right-end shock kept its birth states?
  mid.verify_holds = std::abs(k_o * f.value(v_1) / f.value(u_bar) - k1) <= 1e-8;
  double xi2 = xi2_direct;
  std::string note;
  if (!mid.verify_holds) {
    // The shock interacted with the rarefaction: place xi2 by the transit
    // relation of the trailing characteristic.
    double level = k_o * f.value(v_1) / k1;
    bool degenerate = level >= f.max_value() * (1.0 - 1e-12);
    if (!degenerate) {
      double w1 = f.branch_inverse(level, Branch::Increasing);
      double A = k1 * f.deriv(w1);
      double B = k_o * f.deriv(v_1);
      if (std::abs(B) > 1e-13 && std::abs(1.0 - A / B) > 1e-13) {
        double cand = (xi1 + A * (T2 - b / B)) / (1.0 - A / B);
        mid.xi2_transit = cand;
        if (cand > xi1 && cand <= b + 1e-9) {
          xi2 = std::min(cand, b);
          note = "right-end shock had interacted; transit relation used";
        } else {
          note = "transit relation left the window; direct back-tracing kept";
        }
      } else {
        note = "transit relation degenerate; direct back-tracing kept";
      }
    } else {
      note = "trailing state at the capacity limit; direct back-tracing kept";
    }
  }

  if (!(xi2 > xi1) || xi1 < a - 1e-9 || xi2 > b + 1e-9)
    return failure(ObstructionStatus::Inconsistent,
                   "recovered jump positions leave the window", mid);

  ObstructionResult r;
  r.status = ObstructionStatus::Ok;
  r.obstruction = Obstruction{k1, std::max(xi1, a), std::min(xi2, b), k_o, a, b};
  r.unique = true;
  r.mid = mid;
  r.note = note;
  return r;
}

}  // namespace

ObstructionResult reconstruct_constant_from_arrivals(
    const FluxCurve& f, double k_o, double a, double b, double u_bar, double T1,
    double v_o, double sigma_a, double T2, double v_1, double sigma_b) {
  ObstructionIntermediates mid;
  return constant_reflective(f, k_o, a, b, u_bar, T1, v_o, sigma_a, T2, v_1,
                             sigma_b, mid);
}

ObstructionResult reconstruct_constant(const FluxCurve& f, double k_o, double a,
                                       double b, double u_bar, const Observer& obs) {
  const double um = f.maximizer();
  ObstructionIntermediates mid;
  if (!(u_bar >= f.lo()) || !(u_bar < um))
    return failure(ObstructionStatus::Inconsistent,
                   "constant-data procedure needs a subcritical ambient state", mid);

  ConstantClassification cls = classify_constant_case(obs, u_bar, a, b);
  if (cls.kind == ConstantCase::Invisible)
    return failure(ObstructionStatus::NoObstruction,
                   "traces never left the ambient state; coefficient is ambient", mid);

  if (!cls.at_b)
    return failure(ObstructionStatus::HorizonTooShort,
                   "no transmitted shock reached the right end before the horizon",
                   mid);

  if (cls.kind == ConstantCase::Reflective) {
    const auto& A = *cls.at_a;
    const auto& B = *cls.at_b;
    return constant_reflective(f, k_o, a, b, u_bar, A.time, A.u_right, A.speed,
                               B.time, B.u_left, B.speed, mid);
  }

  // Transmissive: the right-end shock arrives at T1 with states (v_o, u_bar);
  // the rarefaction behind it fixes the first jump.
  const auto& B = *cls.at_b;
  double T1 = B.time;
  double v_o = B.u_left;
  double sigma_b = B.speed;
  mid.T1 = T1;
  mid.v_o = v_o;
  mid.sigma_b = sigma_b;
  if (!(sigma_b > 0.0))
    return failure(ObstructionStatus::Inconsistent,
                   "a transmitted shock must travel forward", mid);

  auto rar = obs.first_arrival(b, [&](double u) { return u > v_o + 1e-12; }, T1);
  if (!rar)
    return failure(ObstructionStatus::HorizonTooShort,
                   "the trailing rarefaction never reached the right end", mid);
  double tau = rar->time;
  mid.T2 = tau;

  double k1 = k_o * f.value(v_o) / f.value(u_bar);
  if (!(k1 > 0.0) || !(k1 < k_o))
    return failure(ObstructionStatus::Inconsistent,
                   "arrived state incompatible with a reduced coefficient", mid);
  double xi2 = b - sigma_b * T1;
  mid.xi2_direct = xi2;

  // Uniqueness: a clear gap between the shock and the trailing rarefaction
  // means they had not yet interacted (the separation far exceeds one
  // rarefaction step's arrival spacing).
  double gap_scale = 50.0 * obs.scenario().delta * std::max(T1, 1.0);
  bool unique = (tau - T1) > gap_scale;

  double w_ref = f.branch_inverse(k_o * f.value(v_o) / k1, Branch::Increasing);
  double A = k1 * f.deriv(w_ref);
  double Bc = k_o * f.deriv(v_o);
  double transit_time = unique ? tau : T1;
  double width = (transit_time - (b - xi2) / Bc) * A;
  mid.xi2_transit = width;
  double xi1 = xi2 - width;

  if (!(width > 0.0) || xi1 < a - 1e-9)
    return failure(ObstructionStatus::Inconsistent,
                   "transit relation placed the first jump outside the window", mid);

  ObstructionResult r;
  r.status = ObstructionStatus::Ok;
  r.obstruction = Obstruction{k1, std::max(xi1, a), std::min(xi2, b), k_o, a, b};
  r.unique = unique;
  r.mid = mid;
  if (!unique)
    r.note = "shock and rarefaction arrived merged: the triple is one of many "
             "that reproduce the observations";
  return r;
}

ObstructionResult reconstruct_constant_extrapolated(
    const FluxCurve& f, double k_o, double a, double b, double u_bar,
    const std::function<Observer(double delta)>& factory, double delta) {
  ObstructionResult r1 = reconstruct_constant(f, k_o, a, b, u_bar, factory(delta));
  if (!r1.ok()) return r1;
  ObstructionResult r2 =
      reconstruct_constant(f, k_o, a, b, u_bar, factory(0.5 * delta));
  if (!r2.ok()) return r2;
  ObstructionResult r4 =
      reconstruct_constant(f, k_o, a, b, u_bar, factory(0.25 * delta));
  if (!r4.ok()) return r4;
  if (r1.unique != r4.unique || r2.unique != r4.unique) return r4;
  ObstructionResult r = r4;
  auto extrap = [](double p1, double p2, double p4) {
    return (8.0 * p4 - 6.0 * p2 + p1) / 3.0;
  };
  r.obstruction.k1 =
      extrap(r1.obstruction.k1, r2.obstruction.k1, r4.obstruction.k1);
  r.obstruction.xi1 =
      extrap(r1.obstruction.xi1, r2.obstruction.xi1, r4.obstruction.xi1);
  r.obstruction.xi2 =
      extrap(r1.obstruction.xi2, r2.obstruction.xi2, r4.obstruction.xi2);
  r.obstruction.xi1 = std::clamp(r.obstruction.xi1, a, b);
  r.obstruction.xi2 = std::clamp(r.obstruction.xi2, r.obstruction.xi1, b);
  return r;
}

}  // namespace ft
