#include "ft/envelope.hpp"

#include <algorithm>
#include <cmath>

#include "ft/constants.hpp"

namespace ft {

namespace {

struct Pt {
  double u, v;
};

// Lower convex hull of a u-sorted point list (Andrew's monotone chain).
std::vector<int> lower_hull(const std::vector<Pt>& p) {
  std::vector<int> h;
  for (int i = 0; i < static_cast<int>(p.size()); ++i) {
    while (h.size() >= 2) {
      const Pt &a = p[h[h.size() - 2]], &b = p[h.back()], &c = p[i];
      double cross = (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u);
      if (cross <= 0.0)
        h.pop_back();
      else
        break;
    }
    h.push_back(i);
  }
  return h;
}

// Refine the tangency point of a chord anchored at (ua, f(ua)) touching f
// near c0: solve f'(c)*(c-ua) - (f(c)-f(ua)) = 0 in [clo, chi].
double refine_tangency(const FluxCurve& f, double ua, double c0, double clo,
                       double chi) {
  auto g = [&](double c) { return f.deriv(c) * (c - ua) - (f.value(c) - f.value(ua)); };
  double glo = g(clo), ghi = g(chi);
  if (glo == 0.0) return clo;
  if (ghi == 0.0) return chi;
  if (glo * ghi > 0.0) return c0;  // no bracket: keep the grid estimate
  for (int it = 0; it < 200 && chi - clo > tol::root * 0.01; ++it) {
    double m = 0.5 * (clo + chi);
    double gm = g(m);
    if (gm == 0.0) return m;
    if (gm * glo > 0.0) {
      clo = m;
      glo = gm;
    } else {
      chi = m;
    }
  }
  return 0.5 * (clo + chi);
}

}  // namespace

double Envelope::value(const FluxCurve& f, double u) const {
  for (const auto& s : segments) {
    if (u <= s.u1 + tol::state_eq && u >= s.u0 - tol::state_eq) {
      if (!s.chord) return f.value(u);
      double f0 = f.value(s.u0);
      return f0 + s.slope() * (u - s.u0);
    }
  }
  throw std::domain_error("Envelope::value outside [u_lo,u_hi]");
}

bool Envelope::in_contact(double u, double tolerance) const {
  for (const auto& s : segments) {
    if (u < s.u0 - tolerance || u > s.u1 + tolerance) continue;
    if (!s.chord) return true;
    if (std::abs(u - s.u0) <= tolerance || std::abs(u - s.u1) <= tolerance)
      return true;
  }
  return false;
}

Envelope build_envelope(const FluxCurve& f, double u_lo, double u_hi, bool lower) {
  if (!(u_lo < u_hi)) throw std::invalid_argument("build_envelope: u_lo < u_hi required");
  f.check_domain(u_lo);
  f.check_domain(u_hi);

  Envelope env;
  env.lower = lower;

  // Concave curves: the hull is a single piece either way.
  if (f.concave_h1()) {
    EnvelopeSegment s;
    s.u0 = u_lo;
    s.u1 = u_hi;
    if (lower) {
      s.chord = true;
      s.slope_ = (f.value(u_hi) - f.value(u_lo)) / (u_hi - u_lo);
    } else {
      s.chord = false;
    }
    env.segments.push_back(s);
    return env;
  }

  // Sample points: grid plus exact abscissas for piecewise-linear curves.
  std::vector<Pt> pts;
  const double sgn = lower ? 1.0 : -1.0;
  if (f.kind() == FluxCurve::Kind::PiecewiseLinear) {
    pts.push_back({u_lo, sgn * f.value(u_lo)});
    for (const auto& n : f.nodes())
      if (n.first > u_lo + 1e-15 && n.first < u_hi - 1e-15)
        pts.push_back({n.first, sgn * n.second});
    pts.push_back({u_hi, sgn * f.value(u_hi)});
  } else {
    const int n = 2048;
    pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
      double u = u_lo + (u_hi - u_lo) * i / double(n);
      pts.push_back({u, sgn * f.value(u)});
    }
  }

  std::vector<int> hull = lower_hull(pts);

  // Convert hull runs into arcs (consecutive samples, envelope == f) and
  // chords (skipped samples).
  const bool exact = (f.kind() == FluxCurve::Kind::PiecewiseLinear);
  std::vector<EnvelopeSegment> raw;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    int a = hull[i], b = hull[i + 1];
    EnvelopeSegment s;
    s.u0 = pts[a].u;
    s.u1 = pts[b].u;
    s.chord = (b != a + 1);
    raw.push_back(s);
  }
  if (raw.empty()) {
    EnvelopeSegment s;
    s.u0 = u_lo;
    s.u1 = u_hi;
    s.chord = false;
    raw.push_back(s);
  }

  // Merge consecutive arc steps; keep chords separate.
  std::vector<EnvelopeSegment> segs;
  for (const auto& s : raw) {
    if (!s.chord && !segs.empty() && !segs.back().chord) {
      segs.back().u1 = s.u1;
    } else {
      segs.push_back(s);
    }
  }

  // Refine chord endpoints against smooth arcs (tangency conditions).
  if (!exact) {
    const double grid_h = (u_hi - u_lo) / 2048.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (!segs[i].chord) continue;
      bool left_tangent = (i > 0 && !segs[i - 1].chord);
      bool right_tangent = (i + 1 < segs.size() && !segs[i + 1].chord);
      double c = segs[i].u0, d = segs[i].u1;
      for (int round = 0; round < 40; ++round) {
        double c_new = c, d_new = d;
        if (left_tangent)
          c_new = refine_tangency(f, d, c, std::max(u_lo, c - 2 * grid_h),
                                  std::min(d, c + 2 * grid_h));
        if (right_tangent)
          d_new = refine_tangency(f, c_new, d, std::max(c_new, d - 2 * grid_h),
                                  std::min(u_hi, d + 2 * grid_h));
        double move = std::abs(c_new - c) + std::abs(d_new - d);
        c = c_new;
        d = d_new;
        if (move < tol::root * 0.1) break;
      }
      segs[i].u0 = c;
      segs[i].u1 = d;
      if (left_tangent) segs[i - 1].u1 = c;
      if (right_tangent) segs[i + 1].u0 = d;
    }
  }

  // Final slopes and cleanup of degenerate pieces.
  for (auto& s : segs)
    if (s.chord)
      s.slope_ = (f.value(s.u1) - f.value(s.u0)) / (s.u1 - s.u0);
  std::vector<EnvelopeSegment> out;
  for (auto& s : segs)
    if (s.u1 - s.u0 > tol::zero_wave) out.push_back(s);
  if (out.empty()) {
    EnvelopeSegment s;
    s.u0 = u_lo;
    s.u1 = u_hi;
    s.chord = true;
    s.slope_ = (f.value(u_hi) - f.value(u_lo)) / (u_hi - u_lo);
    out.push_back(s);
  }
  out.front().u0 = u_lo;
  out.back().u1 = u_hi;
  env.segments = std::move(out);
  return env;
}

}  // namespace ft
