#include "ft/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ft/constants.hpp"
#include "ft/envelope.hpp"

namespace ft {

namespace {

double chord_speed(const FluxCurve& f, double k, double a, double b) {
  return k * (f.value(b) - f.value(a)) / (b - a);
}

// Append the u-wave (shock or rarefaction) between ul and ur at constant k
// for a concave flux: single shock if ul < ur, single rarefaction if
// ul > ur. Zero-strength waves are dropped.
void push_concave_uwave(std::vector<Wave>& waves, const FluxCurve& f, double k,
                        double ul, double ur) {
  if (std::abs(ur - ul) < tol::zero_wave) return;
  if (ul < ur)
    waves.push_back(Shock{ul, ur, chord_speed(f, k, ul, ur)});
  else
    waves.push_back(Rarefaction{ul, ur, k});
}

// State inside a rarefaction at characteristic speed xi: solve k f'(u)=xi.
// f' is monotone along a contact arc, decreasing in u for concave pieces
// and either way for general arcs; bisect on the arc's state range.
double rarefaction_state(const FluxCurve& f, const Rarefaction& r, double xi) {
  double a = r.u_left, b = r.u_right;
  double ga = r.k * f.deriv(a) - xi;
  double gb = r.k * f.deriv(b) - xi;
  if (ga == 0.0 || ga * gb > 0.0) return std::abs(ga) < std::abs(gb) ? a : b;
  for (int it = 0; it < 200 && std::abs(b - a) > tol::root * 0.01; ++it) {
    double m = 0.5 * (a + b);
    double gm = r.k * f.deriv(m) - xi;
    if (gm == 0.0) return m;
    if (gm * ga > 0.0) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double wave_speed_lo(const Wave& w, const FluxCurve& f) {
  if (auto* s = std::get_if<Shock>(&w)) return s->speed;
  if (auto* r = std::get_if<Rarefaction>(&w))
    return std::min(r->k * f.deriv(r->u_left), r->k * f.deriv(r->u_right));
  return 0.0;
}

double wave_speed_hi(const Wave& w, const FluxCurve& f) {
  if (auto* s = std::get_if<Shock>(&w)) return s->speed;
  if (auto* r = std::get_if<Rarefaction>(&w))
    return std::max(r->k * f.deriv(r->u_left), r->k * f.deriv(r->u_right));
  return 0.0;
}

double WaveFan::sample(const FluxCurve& f, double xi, bool from_left) const {
  double u = u_left;
  for (const auto& w : waves) {
    double lo = wave_speed_lo(w, f);
    double hi = wave_speed_hi(w, f);
    if (xi < lo || (xi == lo && from_left)) return u;
    if (auto* r = std::get_if<Rarefaction>(&w)) {
      if (xi < hi || (xi == hi && from_left && hi > lo))
        return rarefaction_state(f, *r, xi);
      u = r->u_right;
    } else if (auto* s = std::get_if<Shock>(&w)) {
      u = s->u_right;
    } else {
      u = std::get<KWave>(w).u_right;
    }
  }
  return u;
}

double WaveFan::coeff_at(double xi, bool from_left) const {
  for (const auto& w : waves) {
    if (auto* kw = std::get_if<KWave>(&w)) {
      if (xi < 0.0 || (xi == 0.0 && from_left)) return kw->k_left;
      return kw->k_right;
    }
  }
  return k_left;
}

std::optional<std::string> WaveFan::invariant_violation(const FluxCurve& f) const {
  std::ostringstream err;
  double u = u_left;
  double k = k_left;
  double prev_hi = -1e300;
  for (const auto& w : waves) {
    double lo = wave_speed_lo(w, f);
    double hi = wave_speed_hi(w, f);
    if (lo < prev_hi - tol::rankine_hugoniot) {
      err << "speed ordering violated: " << lo << " after " << prev_hi;
      return err.str();
    }
    prev_hi = hi;
    if (auto* s = std::get_if<Shock>(&w)) {
      if (std::abs(s->u_left - u) > tol::state_eq) return "state chain broken at shock";
      double res = s->speed * (s->u_right - s->u_left) -
                   k * (f.value(s->u_right) - f.value(s->u_left));
      if (std::abs(res) > tol::rankine_hugoniot) {
        err << "Rankine-Hugoniot residual " << res;
        return err.str();
      }
      u = s->u_right;
    } else if (auto* r = std::get_if<Rarefaction>(&w)) {
      if (std::abs(r->u_left - u) > tol::state_eq)
        return "state chain broken at rarefaction";
      if (std::abs(r->k - k) > tol::state_eq) return "rarefaction coefficient mismatch";
      u = r->u_right;
    } else {
      const auto& kw = std::get<KWave>(w);
      if (std::abs(kw.u_left - u) > tol::state_eq) return "state chain broken at k-wave";
      if (std::abs(kw.k_left - k) > tol::state_eq) return "k chain broken at k-wave";
      double res = kw.k_left * f.value(kw.u_left) - kw.k_right * f.value(kw.u_right);
      if (std::abs(res) > tol::rankine_hugoniot) {
        err << "stationary flux-matching residual " << res;
        return err.str();
      }
      u = kw.u_right;
      k = kw.k_right;
    }
  }
  if (std::abs(u - u_right) > tol::state_eq) return "right state not reached";
  if (std::abs(k - k_right) > tol::state_eq) return "right coefficient not reached";
  // Flux continuity across xi = 0.
  double fl = coeff_at(0.0, true) * f.value(sample(f, 0.0, true));
  double fr = coeff_at(0.0, false) * f.value(sample(f, 0.0, false));
  if (std::abs(fl - fr) > 10 * tol::rankine_hugoniot) {
    err << "flux discontinuity at xi=0: " << fl - fr;
    return err.str();
  }
  return std::nullopt;
}

WaveFan solve_homogeneous(const FluxCurve& f, double k, double u_left,
                          double u_right) {
  if (!(k > 0.0)) throw std::invalid_argument("solve_homogeneous: k must be positive");
  f.check_domain(u_left);
  f.check_domain(u_right);
  WaveFan fan{u_left, k, u_right, k, {}};
  if (std::abs(u_left - u_right) < tol::zero_wave) return fan;

  if (f.concave_h1()) {
    push_concave_uwave(fan.waves, f, k, u_left, u_right);
    return fan;
  }

  // General flux: envelope construction. Increasing data uses the convex
  // envelope; decreasing data the concave one. Traversal emits waves in
  // order of increasing speed. Contact arcs of a piecewise-linear flux are
  // fans of contact discontinuities, one per linear piece, each moving at
  // its piece's slope (pointwise derivatives are ill-defined at the kinks).
  const bool polygonal = f.kind() == FluxCurve::Kind::PiecewiseLinear;
  auto emit_arc = [&](double a, double b) {
    // a -> b along the arc in traversal order (left state first).
    if (!polygonal) {
      fan.waves.push_back(Rarefaction{a, b, k});
      return;
    }
    double lo = std::min(a, b), hi = std::max(a, b);
    std::vector<double> cuts{lo};
    for (const auto& nd : f.nodes())
      if (nd.first > lo + tol::zero_wave && nd.first < hi - tol::zero_wave)
        cuts.push_back(nd.first);
    cuts.push_back(hi);
    if (a > b) std::reverse(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      fan.waves.push_back(
          Shock{cuts[i], cuts[i + 1], chord_speed(f, k, cuts[i], cuts[i + 1])});
  };
  bool increasing = u_left < u_right;
  double a = std::min(u_left, u_right), b = std::max(u_left, u_right);
  Envelope env = build_envelope(f, a, b, increasing);
  if (increasing) {
    for (const auto& s : env.segments) {
      if (s.u1 - s.u0 < tol::zero_wave) continue;
      if (s.chord)
        fan.waves.push_back(Shock{s.u0, s.u1, k * s.slope()});
      else
        emit_arc(s.u0, s.u1);
    }
  } else {
    for (auto it = env.segments.rbegin(); it != env.segments.rend(); ++it) {
      if (it->u1 - it->u0 < tol::zero_wave) continue;
      if (it->chord)
        fan.waves.push_back(Shock{it->u1, it->u0, k * it->slope()});
      else
        emit_arc(it->u1, it->u0);
    }
  }
  return fan;
}

std::vector<StationaryPartner> stationary_partners(const FluxCurve& f,
                                                   double k_from, double u,
                                                   double k_to) {
  if (!(k_from > 0.0) || !(k_to > 0.0))
    throw std::invalid_argument("stationary_partners: coefficients must be positive");
  double level = k_from * f.value(u) / k_to;
  if (level > f.max_value() * (1.0 + 1e-12) + tol::root) return {};
  double lo = f.branch_inverse(level, Branch::Increasing);
  double hi = f.branch_inverse(level, Branch::Decreasing);
  if (std::abs(hi - lo) < tol::state_eq)
    return {{0.5 * (lo + hi), PartnerBranch::Increasing}};
  return {{lo, PartnerBranch::Increasing}, {hi, PartnerBranch::Decreasing}};
}

WaveFan solve_two_k(const FluxCurve& f, double k_left, double u_left,
                    double k_right, double u_right) {
  if (!f.concave_h1())
    throw KindMismatchError("solve_two_k requires a concave H1 flux");
  if (!(k_left > 0.0) || !(k_right > 0.0))
    throw std::invalid_argument("solve_two_k: coefficients must be positive");
  if (std::abs(k_left - k_right) < tol::zero_wave)
    return solve_homogeneous(f, k_left, u_left, u_right);
  f.check_domain(u_left);
  f.check_domain(u_right);

  const double um = f.maximizer();
  const double kl = k_left, kr = k_right, ul = u_left, ur = u_right;
  WaveFan fan{ul, kl, ur, kr, {}};
  auto kwave = [&](double a, double b) { fan.waves.push_back(KWave{kl, kr, a, b}); };

  if (kl < kr) {
    if (ul <= um) {
      // Case 1.
      if (ur <= um || kl * f.value(ul) < kr * f.value(ur)) {
        double v = f.branch_inverse(kl * f.value(ul) / kr, Branch::Increasing);
        kwave(ul, v);
        push_concave_uwave(fan.waves, f, kr, v, ur);
      } else {
        double w = f.branch_inverse(kr * f.value(ur) / kl, Branch::Decreasing);
        push_concave_uwave(fan.waves, f, kl, ul, w);
        kwave(w, ur);
      }
    } else {
      // Case 2.
      if (ur <= um || kr * f.value(ur) > kl * f.max_value()) {
        double v = f.branch_inverse(kl * f.max_value() / kr, Branch::Increasing);
        push_concave_uwave(fan.waves, f, kl, ul, um);
        kwave(um, v);
        push_concave_uwave(fan.waves, f, kr, v, ur);
      } else {
        double w = f.branch_inverse(kr * f.value(ur) / kl, Branch::Decreasing);
        push_concave_uwave(fan.waves, f, kl, ul, w);
        kwave(w, ur);
      }
    }
  } else {
    if (ur <= um) {
      // Case 3.
      if (ul >= um || kl * f.value(ul) > kr * f.max_value()) {
        double v = f.branch_inverse(kr * f.max_value() / kl, Branch::Decreasing);
        push_concave_uwave(fan.waves, f, kl, ul, v);
        kwave(v, um);
        push_concave_uwave(fan.waves, f, kr, um, ur);
      } else {
        double w = f.branch_inverse(kl * f.value(ul) / kr, Branch::Increasing);
        kwave(ul, w);
        push_concave_uwave(fan.waves, f, kr, w, ur);
      }
    } else {
      // Case 4.
      if (ul >= um || kl * f.value(ul) >= kr * f.value(ur)) {
        double v = f.branch_inverse(kr * f.value(ur) / kl, Branch::Decreasing);
        push_concave_uwave(fan.waves, f, kl, ul, v);
        kwave(v, ur);
      } else {
        double w = f.branch_inverse(kl * f.value(ul) / kr, Branch::Increasing);
        kwave(ul, w);
        push_concave_uwave(fan.waves, f, kr, w, ur);
      }
    }
  }
  return fan;
}

}  // namespace ft
