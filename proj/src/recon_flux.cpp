#include "ft/recon_flux.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "ft/constants.hpp"

namespace ft {

std::vector<double> ReconGrid::nodes() const {
  std::vector<double> out;
  int n = 1 << nu;
  for (int i = 0; i <= n; ++i) out.push_back(u_lo + (u_hi - u_lo) * i / double(n));
  return out;
}

void RiemannSnapshot::validate_monotone(double u_left, double u_right) const {
  double u = u_left;
  std::size_t ij = 0, ia = 0;
  while (ij < jumps.size() || ia < arcs.size()) {
    bool take_jump = ij < jumps.size() &&
                     (ia >= arcs.size() || jumps[ij].x <= arcs[ia].x_lo + 1e-12);
    if (take_jump) {
      if (jumps[ij].v_left < u - 1e-9 || jumps[ij].v_right < jumps[ij].v_left - 1e-12)
        throw std::invalid_argument("snapshot is not monotone increasing");
      u = jumps[ij].v_right;
      ++ij;
    } else {
      if (arcs[ia].u_lo < u - 1e-9)
        throw std::invalid_argument("snapshot is not monotone increasing");
      if (arcs[ia].u_hi < arcs[ia].u_lo - 1e-12)
        throw std::invalid_argument("snapshot arc decreases");
      u = arcs[ia].u_hi;
      ++ia;
    }
  }
  if (u > u_right + 1e-9 || u < u_right - 1e-9)
    throw std::invalid_argument("snapshot does not reach the right state");
}

RiemannSnapshot snapshot_from_fan(const FluxCurve& f, const WaveFan& fan, double T) {
  RiemannSnapshot s;
  for (const auto& w : fan.waves) {
    if (auto* sh = std::get_if<Shock>(&w)) {
      s.jumps.push_back({sh->speed * T, sh->u_left, sh->u_right});
    } else if (auto* r = std::get_if<Rarefaction>(&w)) {
      RiemannSnapshot::Arc a;
      double s_lo = r->k * f.deriv(r->u_left);
      double s_hi = r->k * f.deriv(r->u_right);
      a.x_lo = std::min(s_lo, s_hi) * T;
      a.x_hi = std::max(s_lo, s_hi) * T;
      a.u_lo = std::min(r->u_left, r->u_right);
      a.u_hi = std::max(r->u_left, r->u_right);
      // Area identity: int u dx = [x u] - int x(u) du with x(u) = T k f'(u).
      double xl = a.x_lo, xr = a.x_hi;
      double u_at_xl = (s_lo <= s_hi) ? r->u_left : r->u_right;
      double u_at_xr = (s_lo <= s_hi) ? r->u_right : r->u_left;
      a.integral_u_dx =
          xr * u_at_xr - xl * u_at_xl - T * r->k * (f.value(u_at_xr) - f.value(u_at_xl));
      s.arcs.push_back(a);
    } else {
      throw std::invalid_argument("snapshot_from_fan: stationary coefficient waves unsupported");
    }
  }
  return s;
}

RiemannSnapshot snapshot_from_profile(const Profile& p) {
  RiemannSnapshot s;
  for (std::size_t i = 0; i < p.xs.size(); ++i)
    s.jumps.push_back({p.xs[i], p.us[i], p.us[i + 1]});
  return s;
}

namespace {

// Equivalent jump location of a monotone arc: the state-average of x(u),
// computed from the x-integral by the area identity.
double equivalent_jump(const RiemannSnapshot::Arc& a) {
  double num = a.u_hi * a.x_hi - a.u_lo * a.x_lo - a.integral_u_dx;
  return num / (a.u_hi - a.u_lo);
}

}  // namespace

StepResult shock_step(const RiemannSnapshot& s, double f_h, double delta, double T) {
  if (s.jumps.size() != 1 || !s.arcs.empty())
    throw std::invalid_argument("shock_step needs a single-jump snapshot");
  return {f_h + delta * s.jumps[0].x / T, StepKind::Shock, {}};
}

StepResult rarefaction_step(const RiemannSnapshot& s, double f_h, double delta,
                            double T) {
  if (s.arcs.size() != 1 || !s.jumps.empty())
    throw std::invalid_argument("rarefaction_step needs a single-arc snapshot");
  const auto& a = s.arcs[0];
  if (a.u_hi < a.u_lo)
    throw std::invalid_argument("rarefaction_step: arc must increase");
  double xi = equivalent_jump(a);
  return {f_h + delta * xi / T, StepKind::Rarefaction, {}};
}

StepResult general_step(const RiemannSnapshot& s, double f_h, double /*delta*/,
                        double T) {
  // Merge genuine jumps with the equivalent jumps of the arcs.
  struct J {
    double y, vl, vr;
  };
  std::vector<J> list;
  for (const auto& j : s.jumps) list.push_back({j.x, j.v_left, j.v_right});
  for (const auto& a : s.arcs) list.push_back({equivalent_jump(a), a.u_lo, a.u_hi});
  std::sort(list.begin(), list.end(), [](const J& a, const J& b) { return a.y < b.y; });

  StepResult out{f_h, StepKind::General, {}};
  double prev_v = list.empty() ? 0.0 : list.front().vl;
  for (const auto& j : list) {
    if (j.vr < j.vl - 1e-12 || j.vl < prev_v - 1e-9)
      throw std::invalid_argument("general_step: plateau values must increase");
    prev_v = j.vr;
  }
  double acc = 0.0;
  for (const auto& j : list) {
    acc += (j.vr - j.vl) * j.y;
    out.interior.emplace_back(j.vr, f_h + acc / T);
  }
  out.f_next = f_h + acc / T;
  if (!out.interior.empty()) out.interior.pop_back();  // last one is the node itself
  if (list.size() == 1 && s.arcs.empty()) out.kind = StepKind::Shock;
  if (list.size() == 1 && s.jumps.empty()) out.kind = StepKind::Rarefaction;
  return out;
}

double FluxReconstruction::derivative_bound(double lip_fprime) const {
  return lip_fprime * delta;
}

FluxReconstruction reconstruct_flux(const ReconGrid& grid, const RiemannOracle& oracle) {
  FluxReconstruction out;
  out.delta = grid.delta();
  auto us = grid.nodes();

  // The observations are independent of each other; only the value
  // reduction is a prefix scan. Fan the snapshots out across threads when
  // there are enough of them to matter.
  const std::size_t m = us.size() - 1;
  std::vector<RiemannSnapshot> snaps(m);
  std::vector<std::string> errors(m);
  auto observe_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t h = lo; h < hi; ++h) {
      try {
        snaps[h] = oracle(us[h], us[h + 1], grid.T);
      } catch (const std::exception& e) {
        errors[h] = e.what();
      }
    }
  };
  unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(),
                                        m >= 16 ? 8u : 1u);
  if (workers > 1) {
    std::vector<std::future<void>> futs;
    std::size_t chunk = (m + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t lo = w * chunk, hi = std::min(m, lo + chunk);
      if (lo >= hi) break;
      futs.push_back(std::async(std::launch::async, observe_range, lo, hi));
    }
    for (auto& f : futs) f.get();
  } else {
    observe_range(0, m);
  }

  std::vector<std::pair<double, double>> poly_nodes;
  double f_h = grid.anchor_c;
  out.nodes.push_back({us[0], f_h, StepKind::Shock});
  poly_nodes.emplace_back(us[0], f_h);
  for (std::size_t h = 0; h + 1 < us.size(); ++h) {
    StepResult st;
    try {
      if (!errors[h].empty()) throw std::runtime_error(errors[h]);
      snaps[h].validate_monotone(us[h], us[h + 1]);
      st = general_step(snaps[h], f_h, grid.delta(), grid.T);
    } catch (const std::exception& e) {
      out.gaps.push_back("interval " + std::to_string(h) + ": " + e.what());
      // Bridge the gap with a flat continuation so later nodes stay usable.
      st = StepResult{f_h, StepKind::General, {}};
    }
    for (auto& iv : st.interior) {
      if (iv.first > us[h] + 1e-12 && iv.first < us[h + 1] - 1e-12) {
        poly_nodes.emplace_back(iv.first, iv.second);
        out.interior_nodes.push_back(iv);
      }
    }
    f_h = st.f_next;
    out.nodes.push_back({us[h + 1], f_h, st.kind});
    poly_nodes.emplace_back(us[h + 1], f_h);
  }
  std::sort(poly_nodes.begin(), poly_nodes.end());
  poly_nodes.erase(std::unique(poly_nodes.begin(), poly_nodes.end(),
                               [](const auto& a, const auto& b) {
                                 return std::abs(a.first - b.first) < 1e-13;
                               }),
                   poly_nodes.end());
  out.flux = FluxCurve::piecewise_linear(poly_nodes);
  for (std::size_t i = 0; i + 2 < out.nodes.size(); ++i) {
    double s0 = (out.nodes[i + 1].f - out.nodes[i].f) /
                (out.nodes[i + 1].u - out.nodes[i].u);
    double s1 = (out.nodes[i + 2].f - out.nodes[i + 1].f) /
                (out.nodes[i + 2].u - out.nodes[i + 1].u);
    double span = 0.5 * (out.nodes[i + 2].u - out.nodes[i].u);
    out.lip_fprime_estimate = std::max(out.lip_fprime_estimate,
                                       std::abs(s1 - s0) / span);
  }
  return out;
}

FluxReconstruction refine_flux(const ReconGrid& grid,
                               const FluxReconstruction& coarse, int nu_fine,
                               const std::vector<int>& flagged_intervals,
                               const RiemannOracle& oracle) {
  if (nu_fine <= grid.nu)
    throw std::invalid_argument("refine_flux: nu_fine must exceed the coarse nu");
  if (flagged_intervals.empty()) return coarse;

  FluxReconstruction out = coarse;
  out.interior_nodes.clear();
  std::vector<std::pair<double, double>> poly_nodes;
  for (const auto& n : coarse.nodes) poly_nodes.emplace_back(n.u, n.f);

  const int sub = 1 << (nu_fine - grid.nu);
  const double dfine = (grid.u_hi - grid.u_lo) / double(1 << nu_fine);
  for (int h : flagged_intervals) {
    double ua = coarse.nodes[h].u;
    double fa = coarse.nodes[h].f;
    for (int j = 0; j < sub; ++j) {
      double u0 = ua + dfine * j;
      double u1 = ua + dfine * (j + 1);
      RiemannSnapshot snap = oracle(u0, u1, grid.T);
      snap.validate_monotone(u0, u1);
      StepResult st = general_step(snap, fa, dfine, grid.T);
      fa = st.f_next;
      if (j + 1 < sub) poly_nodes.emplace_back(u1, fa);
    }
  }
  std::sort(poly_nodes.begin(), poly_nodes.end());
  poly_nodes.erase(std::unique(poly_nodes.begin(), poly_nodes.end(),
                               [](const auto& a, const auto& b) {
                                 return std::abs(a.first - b.first) < 1e-13;
                               }),
                   poly_nodes.end());
  out.flux = FluxCurve::piecewise_linear(poly_nodes);
  out.delta = dfine;
  return out;
}

}  // namespace ft
