// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ft/csv.hpp"
#include "ft/illposed.hpp"
#include "ft/observe.hpp"
#include "ft/recon_flux.hpp"
#include "ft/recon_k.hpp"
#include "ft/recon_obstruction.hpp"
#include "ft/riemann.hpp"

using namespace ft;

namespace {

int failures = 0;

struct Criterion {
  std::string name;
  bool ok = true;
  std::vector<std::string> notes;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("FAILED: " + what);
    }
  }
  void expect_le(double value, double bound, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s (%.3e <= %.3e)", what.c_str(), value, bound);
    expect(value <= bound, buf);
  }
  void note(const std::string& s) { notes.push_back(s); }
  void finish() {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                start)
                      .count();
    std::printf("[%s] %s (%.1f s)\n", name.c_str(), ok ? "PASS" : "FAIL", secs);
    for (const auto& n : notes) std::printf("      %s\n", n.c_str());
    if (!ok) ++failures;
  }
};

// ---------------------------------------------------------------------------
// AC1: worked flux-reconstruction fixture

void ac1() {
  Criterion c{"AC1 flux reconstruction worked fixture"};
  // Observations: single shocks at x=3, 1, -4/5 for the first three
  // intervals; the last interval shows a shock at -5/2 with states
  // (3/4, 7/8) and an adjacent rarefaction up to x=0 with integral 9/4.
  RiemannOracle oracle = [](double ua, double, double) {
    RiemannSnapshot s;
    if (ua == 0.0)
      s.jumps.push_back({3.0, 0.0, 0.25});
    else if (ua == 0.25)
      s.jumps.push_back({1.0, 0.25, 0.5});
    else if (ua == 0.5)
      s.jumps.push_back({-0.8, 0.5, 0.75});
    else {
      s.jumps.push_back({-2.5, 0.75, 0.875});
      s.arcs.push_back({-2.5, 0.0, 0.875, 1.0, 9.0 / 4.0});
    }
    return s;
  };
  ReconGrid grid{0.0, 1.0, 2, 0.0, 1.0};
  auto rec = reconstruct_flux(grid, oracle);
  auto node_f = [&](double u) {
    for (const auto& n : rec.nodes)
      if (std::abs(n.u - u) < 1e-12) return n.f;
    return 1e300;
  };
  c.expect_le(std::abs(node_f(0.25) - 0.75), 1e-12, "f(1/4) = 3/4");
  c.expect_le(std::abs(node_f(0.5) - 1.0), 1e-12, "f(1/2) = 1");
  c.expect_le(std::abs(node_f(0.75) - 0.8), 1e-12, "f(3/4) = 4/5");
  double f78 = rec.interior_nodes.size() == 1 ? rec.interior_nodes[0].second : 1e300;
  c.expect_le(std::abs(f78 - (node_f(0.75) - 5.0 / 16.0)), 1e-12,
              "f(7/8) = f(3/4) - 5/16");
  c.expect_le(std::abs(node_f(1.0) - (f78 - 1.0 / 16.0)), 1e-12,
              "f(1) = f(7/8) - 1/16");
  c.note("note: a value 7/16 at u=7/8 would follow only from f(3/4)=3/4; the "
         "computed chain has f(3/4)=4/5, giving f(7/8)=39/80 (documented erratum)");
  c.finish();
}

// ---------------------------------------------------------------------------
// AC2: worked constant-data obstruction fixture

void ac2() {
  Criterion c{"AC2 obstruction arithmetic worked fixture"};
  auto f = FluxCurve::lwr();
  auto r = reconstruct_constant_from_arrivals(f, 1.0, 0.0, 2.0, 1.0 / 3.0, 0.5,
                                              5.0 / 6.0, -1.0 / 6.0, 0.66,
                                              1.0 / 6.0, 0.5);
  c.expect(r.ok(), "fixture reconstruction succeeds");
  if (r.ok()) {
    c.expect_le(std::abs(r.obstruction.k1 - 5.0 / 9.0), 1e-12, "k1 = 5/9");
    c.expect_le(std::abs(r.obstruction.xi1 - 1.0 / 12.0), 1e-12, "xi1 = 1/12");
    c.expect_le(std::abs(r.obstruction.xi2 - 1.67), 1e-12, "xi2 = 1.67");
    c.expect(!r.mid.verify_holds,
             "interaction check flags the observations as post-interaction");
    c.note("note: k_o f(v_1)/f(u_bar) = 5/8 differs from k1 = 5/9; the transit "
           "relation degenerates at the capacity state, so the direct "
           "back-tracing value is reported (recorded tension)");
  }
  c.finish();
}

// ---------------------------------------------------------------------------
// AC3: flux-recovery error bounds across resolutions

void ac3() {
  Criterion c{"AC3 flux recovery error bounds"};
  auto quad = FluxCurve::lwr();
  auto cubic = FluxCurve::general([](double u) { return u * u * u - 3.0 * u; },
                                  [](double u) { return 3.0 * u * u - 3.0; },
                                  -2.0, 2.0, 12.0, {0.0});
  struct Case {
    const FluxCurve* f;
    Profile datum;
    const char* name;
  };
  Profile datum_q{{-1.0, 0.5}, {0.15, 0.85, 0.35}};
  Profile datum_c{{-1.0, 0.5}, {-1.5, 1.8, -0.5}};
  Case cases[] = {{&quad, datum_q, "quadratic"}, {&cubic, datum_c, "cubic"}};
  const double T = 0.4;
  for (const auto& cs : cases) {
    const FluxCurve& f = *cs.f;
    std::vector<double> Cs;
    for (int nu : {4, 5, 6, 7}) {
      ReconGrid grid{f.lo(), f.hi(), nu, f.value(f.lo()), 0.5};
      RiemannOracle oracle = [&](double ua, double ub, double Tob) {
        return snapshot_from_fan(f, solve_homogeneous(f, 1.0, ua, ub), Tob);
      };
      auto rec = reconstruct_flux(grid, oracle);
      double nerr = 0.0;
      for (const auto& n : rec.nodes)
        nerr = std::max(nerr, std::abs(n.f - f.value(n.u)));
      c.expect_le(nerr, 1e-9, std::string(cs.name) + " node exactness, nu=" +
                                  std::to_string(nu));
      double derr = 0.0;
      for (int i = 0; i < 8000; ++i) {
        double u = f.lo() + (f.hi() - f.lo()) * (i + 0.5) / 8000.0;
        derr = std::max(derr, std::abs(rec.flux.deriv(u) - f.deriv(u)));
      }
      c.expect_le(derr, f.lipschitz_deriv() * grid.delta() + 1e-12,
                  std::string(cs.name) + " derivative bound, nu=" +
                      std::to_string(nu));
      Scenario st{f, SpatialCoeff::constant(1.0), cs.datum, 1e-3, T};
      Scenario sn{rec.flux, SpatialCoeff::constant(1.0), cs.datum, 1e-3, T};
      double gap = profile_l1_distance(evolve_profile(st, T),
                                       evolve_profile(sn, T), -30.0, 30.0);
      Cs.push_back(gap / (T * grid.delta()));
    }
    double mean = 0.0;
    for (double v : Cs) mean += v;
    mean /= Cs.size();
    for (std::size_t i = 0; i < Cs.size(); ++i)
      c.expect(std::abs(Cs[i] - mean) <= 0.25 * mean,
               std::string(cs.name) + " solution-gap constant stable (C=" +
                   std::to_string(Cs[i]) + ", mean=" + std::to_string(mean) + ")");
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%s: fitted C across nu: %.4f %.4f %.4f %.4f",
                  cs.name, Cs[0], Cs[1], Cs[2], Cs[3]);
    c.note(buf);
  }
  c.finish();
}

// ---------------------------------------------------------------------------
// AC4: coefficient recovery roundtrip

void ac4() {
  Criterion c{"AC4 coefficient recovery roundtrip"};
  auto f = FluxCurve::lwr();
  std::mt19937_64 rng(20260810);
  std::uniform_real_distribution<double> V(0.2, 2.0);
  std::uniform_int_distribution<int> N(1, 6);
  const double T = 0.5, delta = 1e-3, u_tilde = 0.25;
  double worst_break = 0.0, worst_value = 0.0, worst_resim = 0.0;
  for (int rep = 0; rep < 25; ++rep) {
    int n = N(rng);
    std::vector<double> breaks, vals;
    for (int i = 0; i < n; ++i)
      breaks.push_back(0.05 + 0.9 * (i + 0.3 * (rep % 3)) / double(n));
    vals.push_back(V(rng));
    for (int i = 0; i < n; ++i) {
      double v = V(rng);
      while (std::abs(v - vals.back()) < 0.05) v = V(rng);
      vals.push_back(v);
    }
    SpatialCoeff truth(breaks, vals);
    auto factory = [&](const Profile& data) {
      return Observer(Scenario{f, truth, data, delta, T}, T);
    };
    auto rec = reconstruct_k(f, factory, 0.0, 1.0, T, u_tilde);
    if (rec.jump_positions.size() != breaks.size()) {
      c.expect(false, "jump count mismatch in repetition " + std::to_string(rep));
      continue;
    }
    for (std::size_t i = 0; i < breaks.size(); ++i)
      worst_break = std::max(worst_break,
                             std::abs(rec.jump_positions[i] - breaks[i]));
    for (std::size_t i = 0; i < vals.size(); ++i)
      worst_value =
          std::max(worst_value, std::abs(rec.coeff.values()[i] - vals[i]));

    auto probe = design_k_probe(f, 0.0, 1.0, T, u_tilde);
    Scenario st{f, truth, probe.data, delta, T};
    Scenario sr{f, rec.coeff, probe.data, delta, T};
    double acc = 0.0;
    for (int i = 1; i <= 10; ++i) {
      double t = T * i / 10.0;
      acc += profile_l1_distance(evolve_profile(st, t), evolve_profile(sr, t),
                                 0.0, 1.0) *
             (T / 10.0);
    }
    worst_resim = std::max(worst_resim, acc);
  }
  c.expect_le(worst_break, 1e-10, "breakpoints recovered");
  c.expect_le(worst_value, 1e-8, "values recovered");
  c.expect_le(worst_resim, 1e-9, "re-simulation agreement on J x [0,T]");
  c.finish();
}

// ---------------------------------------------------------------------------
// AC5: obstruction recovery roundtrips

struct StatScenario {
  Obstruction truth;
  Profile tail;
  StationaryAmbient amb;
};

StatScenario make_stationary_scenario(const FluxCurve& f, std::mt19937_64& rng,
                                      bool falling_branch = false) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  StatScenario s;
  double k1 = 0.25 + 0.65 * U(rng);
  double xi1 = 0.05 + 0.5 * U(rng);
  double xi2 = xi1 + 0.1 + (0.93 - xi1 - 0.1) * U(rng);
  s.truth = Obstruction{k1, xi1, xi2, 1.0, 0.0, 1.0};
  int mode = static_cast<int>(U(rng) * 2.0);
  double u_oa;
  if (mode == 0 && !falling_branch) {
    u_oa = 0.0;  // empty ambient
  } else {
    double level = (0.3 + 0.5 * U(rng)) * k1 * f.max_value();
    u_oa = f.branch_inverse(level, Branch::Increasing);
    if (falling_branch) u_oa = f.companion(u_oa);
  }
  double level = f.value(u_oa);
  double omega = (u_oa <= f.maximizer())
                     ? f.branch_inverse(level / k1, Branch::Increasing)
                     : f.branch_inverse(level / k1, Branch::Decreasing);
  double u_ob = u_oa;
  s.tail = Profile{{xi1, xi2}, {u_oa, omega, u_ob}};
  s.amb = StationaryAmbient{1.0, 0.0, 1.0, u_oa, u_ob};
  return s;
}

void ac5() {
  Criterion c{"AC5 obstruction recovery roundtrips"};
  auto f = FluxCurve::lwr();
  const double delta = 1e-3;
  std::mt19937_64 rng(77);

  // --- stationary protocol ---
  double worst_param = 0.0, worst_trace = 0.0;
  std::vector<double> raw_coarse, raw_fine;
  for (int rep = 0; rep < 50; ++rep) {
    StatScenario s = make_stationary_scenario(f, rng);
    double T = 8.0 + 10.0 / s.truth.k1 +
               40.0 * (s.amb.u_oa > 0.0 ? s.amb.u_oa / f.value(s.amb.u_oa) : 0.0);
    ObstructionResult r;
    for (int attempt = 0; attempt < 3; ++attempt, T *= 1.8) {
      auto factory = [&](const Profile& left, double d) {
        Profile init = splice_profiles(left, s.tail, s.amb.a);
        return Observer(Scenario{f, s.truth.coefficient(), init, d, T}, T,
                        s.amb.a, s.amb.b);
      };
      r = reconstruct_stationary_extrapolated(f, s.amb, 0.5, factory, delta);
      if (r.status != ObstructionStatus::HorizonTooShort) break;
    }
    if (!r.ok()) {
      c.expect(false, "stationary repetition " + std::to_string(rep) +
                          " failed: " + r.note);
      continue;
    }
    double err = std::max({std::abs(r.obstruction.k1 - s.truth.k1),
                           std::abs(r.obstruction.xi1 - s.truth.xi1),
                           std::abs(r.obstruction.xi2 - s.truth.xi2)});
    worst_param = std::max(worst_param, err);

    // Re-simulated traces outside the window, same probe and resolution.
    StationaryProbe probe = probe_stationary(f, s.amb, 0.5);
    auto run_traces = [&](const SpatialCoeff& k) {
      Profile init = splice_profiles(probe.left_data, s.tail, s.amb.a);
      FrontSet fsr(Scenario{f, k, init, delta, T});
      fsr.add_probe(s.amb.a);
      fsr.add_probe(s.amb.b);
      fsr.advance(T);
      return fsr;
    };
    FrontSet to = run_traces(s.truth.coefficient());
    FrontSet tr = run_traces(r.obstruction.coefficient());
    double d = trace_l1_distance(to.trace(s.amb.a), tr.trace(s.amb.a), T) +
               trace_l1_distance(to.trace(s.amb.b), tr.trace(s.amb.b), T);
    worst_trace = std::max(worst_trace, d / T);

    // Raw single-resolution errors for the halving study (first 8 cases).
    if (rep < 8) {
      auto raw = [&](double d0) {
        auto factory1 = [&](const Profile& left) {
          Profile init = splice_profiles(left, s.tail, s.amb.a);
          return Observer(Scenario{f, s.truth.coefficient(), init, d0, T}, T,
                          s.amb.a, s.amb.b);
        };
        return reconstruct_stationary(f, s.amb, 0.5, factory1);
      };
      auto r1 = raw(2e-3), r2 = raw(1e-3);
      if (r1.ok() && r2.ok()) {
        raw_coarse.push_back(std::abs(r1.obstruction.xi1 - s.truth.xi1) +
                             std::abs(r1.obstruction.xi2 - s.truth.xi2));
        raw_fine.push_back(std::abs(r2.obstruction.xi1 - s.truth.xi1) +
                           std::abs(r2.obstruction.xi2 - s.truth.xi2));
      }
    }
  }
  c.expect_le(worst_param, 1e-5, "stationary parameter errors");
  c.expect_le(worst_trace, 1e-6, "stationary re-simulated trace match per unit time");
  if (raw_coarse.size() >= 4) {
    double sc = 0.0, sf = 0.0;
    for (double v : raw_coarse) sc += v;
    for (double v : raw_fine) sf += v;
    c.expect(sf <= 0.65 * sc, "stationary raw position error halves with delta (" +
                                  std::to_string(sf / sc) + " ratio)");
  }

  // --- constant-data protocol ---
  double worst_cparam = 0.0, worst_ctrace = 0.0;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int built = 0, guard = 0;
  while (built < 50 && ++guard < 400) {
    double k1 = 0.25 + 0.65 * U(rng);
    double xi1 = 0.05 + 0.5 * U(rng);
    double xi2 = xi1 + 0.1 + (0.9 - xi1 - 0.1) * U(rng);
    Obstruction truth{k1, xi1, xi2, 1.0, 0.0, 1.0};
    bool reflective = (built % 2 == 0);
    double u_bar;
    if (reflective) {
      double level = std::min((1.15 + 0.4 * U(rng)) * k1 * f.max_value(),
                              0.98 * f.max_value());
      if (level <= k1 * f.max_value() * 1.05) continue;
      u_bar = f.branch_inverse(level, Branch::Increasing);
    } else {
      double level = (0.4 + 0.45 * U(rng)) * k1 * f.max_value();
      u_bar = f.branch_inverse(level, Branch::Increasing);
      // No interaction before b: the trailing characteristic must reach b
      // after the transmitted shock does, with margin.
      double u_t = f.branch_inverse(k1 * f.value(u_bar), Branch::Increasing);
      double sigma = (f.value(u_bar) - f.value(u_t)) / (u_bar - u_t);
      double t_shock = (1.0 - xi2) / sigma;
      double t_edge = (xi2 - xi1) / (k1 * f.deriv(u_bar)) +
                      (1.0 - xi2) / f.deriv(u_t);
      if (t_edge < 1.3 * t_shock) continue;
    }
    ++built;
    double T = 4.0 + 6.0 / k1;
    auto factory = [&](double d) {
      return Observer(Scenario{f, truth.coefficient(), Profile::constant(u_bar),
                               d, T},
                      T, 0.0, 1.0);
    };
    auto r = reconstruct_constant_extrapolated(f, 1.0, 0.0, 1.0, u_bar, factory,
                                               delta);
    if (!r.ok()) {
      c.expect(false, "constant-data repetition failed: " + r.note);
      continue;
    }
    double err = std::max({std::abs(r.obstruction.k1 - truth.k1),
                           std::abs(r.obstruction.xi1 - truth.xi1),
                           std::abs(r.obstruction.xi2 - truth.xi2)});
    worst_cparam = std::max(worst_cparam, err);

    auto run_traces = [&](const SpatialCoeff& k) {
      FrontSet fsr(Scenario{f, k, Profile::constant(u_bar), delta, T});
      fsr.add_probe(0.0);
      fsr.add_probe(1.0);
      fsr.advance(T);
      return fsr;
    };
    FrontSet to = run_traces(truth.coefficient());
    FrontSet tr = run_traces(r.obstruction.coefficient());
    double d = trace_l1_distance(to.trace(0.0), tr.trace(0.0), T) +
               trace_l1_distance(to.trace(1.0), tr.trace(1.0), T);
    worst_ctrace = std::max(worst_ctrace, d / T);
  }
  c.expect(built == 50, "constant-data scenario generation filled the quota");
  c.expect_le(worst_cparam, 1e-5, "constant-data parameter errors");
  c.expect_le(worst_ctrace, 1e-6, "constant-data re-simulated trace match per unit time");

  // --- falling-branch ambient entries: exact when the reflection outruns
  // the returning sweep, honestly flagged otherwise, never a wrong triple ---
  {
    int ok_count = 0, flagged = 0;
    for (int rep = 0; rep < 10; ++rep) {
      StatScenario s = make_stationary_scenario(f, rng, true);
      double T = 8.0 + 10.0 / s.truth.k1 +
                 50.0 * s.amb.u_oa / f.value(s.amb.u_oa);
      auto factory = [&](const Profile& left, double d) {
        Profile init = splice_profiles(left, s.tail, s.amb.a);
        return Observer(Scenario{f, s.truth.coefficient(), init, d, T}, T,
                        s.amb.a, s.amb.b);
      };
      auto r = reconstruct_stationary_extrapolated(f, s.amb, 0.5, factory, delta);
      if (r.ok()) {
        ++ok_count;
        double err = std::max({std::abs(r.obstruction.k1 - s.truth.k1),
                               std::abs(r.obstruction.xi1 - s.truth.xi1),
                               std::abs(r.obstruction.xi2 - s.truth.xi2)});
        c.expect_le(err, 1e-5, "falling-branch recovered parameters");
      } else {
        ++flagged;
        c.expect(r.status == ObstructionStatus::Inconsistent &&
                     r.note.find("returned") != std::string::npos,
                 "falling-branch failure is the flagged returning sweep");
      }
    }
    c.note("falling-branch ambient entries: " + std::to_string(ok_count) +
           " recovered, " + std::to_string(flagged) + " flagged returning sweeps");
  }

  // --- congested scenarios: flagged, never a wrong triple ---
  for (int rep = 0; rep < 5; ++rep) {
    double k1 = 0.3 + 0.1 * rep;
    Obstruction truth{k1, 0.2 + 0.05 * rep, 0.7, 1.0, 0.0, 1.0};
    Profile tail{{truth.xi1, truth.xi2}, {0.0, 1.0, 0.0}};
    StationaryAmbient amb{1.0, 0.0, 1.0, 0.0, 0.0};
    double T = 30.0;
    auto factory = [&](const Profile& left, double d) {
      Profile init = splice_profiles(left, tail, 0.0);
      return Observer(Scenario{f, truth.coefficient(), init, d, T}, T, 0.0, 1.0);
    };
    auto r = reconstruct_stationary_extrapolated(f, amb, 0.5, factory, delta);
    c.expect(r.status == ObstructionStatus::CongestionDetected,
             "congested scenario " + std::to_string(rep) + " flagged");
    c.expect(!r.ok(), "congested scenario never yields a triple");
  }
  c.finish();
}

// ---------------------------------------------------------------------------
// AC6: ill-posedness certificates

void ac6() {
  Criterion c{"AC6 ill-posedness certificates"};
  auto f = FluxCurve::lwr();
  const double a = 0.0, b = 3.0, T = 25.0;
  const double amp = 0.005;
  Profile data{{-0.5}, {amp, 0.0}};

  SpanCoeff base2{1.0, 0.5, {0.8, 0.9}, {0.35, 0.6}};
  auto widened = widen_family(base2, 0.6, b);
  auto shifted = shift_family(base2, 0.3);
  SpanCoeff base3{1.0, 0.5, {0.6, 0.7, 0.8}, {0.3, 0.45, 0.7}};
  auto merged = merge_family(base3);
  auto swapped = swap_family(base3);

  // Transit-time identities (pure arithmetic).
  c.expect_le(std::abs(widened.transit_sum() -
                       (base2.transit_sum() + 0.6 / base2.k_ambient)),
              1e-14, "widened transit identity");
  c.expect_le(std::abs(shifted.transit_sum() - base2.transit_sum()), 1e-14,
              "shifted transit identity");
  c.expect_le(std::abs(merged.merged.transit_sum() - base3.transit_sum()), 1e-14,
              "merged transit identity");
  c.expect_le(std::abs(merged.single.transit_sum() - base3.transit_sum()), 1e-14,
              "single-obstruction transit identity");
  c.expect_le(std::abs(swapped.transit_sum() - base3.transit_sum()), 1e-14,
              "swapped transit identity");

  // Range assertions.
  c.expect(widened.values[1] > base2.values[1] &&
               widened.values[1] < base2.k_ambient,
           "widened value range");
  c.expect(shifted.values[1] > base2.values[0] &&
               shifted.values[1] < base2.values[1],
           "shifted value range");
  c.expect(merged.ell > base3.values[1] && merged.ell < base3.values[2],
           "merged value range");

  // Simulated deviations at two resolutions.
  struct Pair {
    const char* name;
    SpatialCoeff A, B;
  };
  Pair pairs[] = {{"widened", base2.coefficient(), widened.coefficient()},
                  {"shifted", base2.coefficient(), shifted.coefficient()},
                  {"merged", base3.coefficient(), merged.merged.coefficient()},
                  {"swapped", base3.coefficient(), swapped.coefficient()}};
  double family_worst = 0.0;
  for (const auto& p : pairs) {
    for (double d : {1e-3, 5e-4}) {
      auto rep = indistinguishable(f, p.A, p.B, a, b, data, T, d, 1.0);
      c.expect_le(rep.deviation_l1, 5.0 * d,
                  std::string(p.name) + " deviation within the resolution bound");
      family_worst = std::max(family_worst, rep.deviation_l1);
    }
  }
  // The swapped pair is exactly indistinguishable: its residual is purely
  // discretization and halves with delta.
  auto sw1 = indistinguishable(f, base3.coefficient(), swapped.coefficient(), a, b,
                               data, T, 1e-3, 1.0);
  auto sw2 = indistinguishable(f, base3.coefficient(), swapped.coefficient(), a, b,
                               data, T, 5e-4, 1.0);
  c.expect(sw2.deviation_sup <= 0.6 * sw1.deviation_sup + 1e-12,
           "swapped residual halves with delta");

  // Control perturbation: k1 alone changed by 10%.
  SpanCoeff control = base2;
  control.values[0] *= 1.1;
  auto repc = indistinguishable(f, base2.coefficient(), control.coefficient(), a, b,
                                data, T, 5e-4, 1.0);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "control deviation %.3e vs worst family deviation %.3e",
                repc.deviation_l1, family_worst);
  c.note(buf);
  c.expect(repc.deviation_l1 > 100.0 * family_worst,
           "control perturbation deviates by more than 100x the family bound");

  // Single-obstruction collapse feeds back through the stationary recovery.
  {
    Obstruction ob{merged.ell_prime, base3.xi,
                   base3.xi + base3.chi[0] + base3.chi[1] + base3.chi[2], 1.0, a, b};
    Profile tail{{ob.xi1, ob.xi2}, {0.0, 0.0, 0.0}};
    tail = Profile{{}, {0.0}};
    StationaryAmbient amb{1.0, a, b, 0.0, 0.0};
    double Tr = 10.0 + 10.0 / ob.k1;
    auto factory = [&](const Profile& left, double d) {
      Profile init = splice_profiles(left, Profile::constant(0.0), a);
      return Observer(Scenario{f, ob.coefficient(), init, d, Tr}, Tr, a, b);
    };
    auto r = reconstruct_stationary_extrapolated(f, amb, 0.5, factory, 1e-3);
    c.expect(r.ok(), "collapsed coefficient reconstructs");
    if (r.ok()) {
      c.expect_le(std::abs(r.obstruction.k1 - ob.k1), 1e-6,
                  "collapsed value recovered");
      c.expect_le(std::abs(r.obstruction.xi1 - ob.xi1), 1e-5,
                  "collapsed left jump recovered");
      c.expect_le(std::abs(r.obstruction.xi2 - ob.xi2), 1e-5,
                  "collapsed right jump recovered");
    }
  }
  c.finish();
}

// ---------------------------------------------------------------------------
// AC7: solver property suite

void ac7() {
  Criterion c{"AC7 solver property suite"};
  auto f = FluxCurve::lwr();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uniform_real_distribution<double> K(0.2, 2.0);

  // 200 fuzzed two-coefficient fans: invariants + smallest jump.
  bool all_ok = true;
  for (int rep = 0; rep < 200; ++rep) {
    double ul = U(rng), ur = U(rng), kl = K(rng), kr = K(rng);
    auto fan = solve_two_k(f, kl, ul, kr, ur);
    if (fan.invariant_violation(f)) all_ok = false;
    for (const auto& w : fan.waves) {
      auto* kw = std::get_if<KWave>(&w);
      if (!kw) continue;
      auto partners = stationary_partners(f, kw->k_left, kw->u_left, kw->k_right);
      double jump = std::abs(kw->u_right - kw->u_left);
      for (const auto& cand : partners) {
        if (std::abs(cand.state - kw->u_right) < 1e-6) continue;
        if (jump >= std::abs(cand.state - kw->u_left) + 1e-12) all_ok = false;
      }
    }
  }
  c.expect(all_ok, "two-coefficient fan invariants and smallest-jump condition");

  // Mass conservation over a compactly supported datum.
  {
    SpatialCoeff k({0.2, 0.9}, {1.0, 0.5, 1.0});
    Profile init{{-2.0, -1.0}, {0.0, 0.55, 0.0}};
    Scenario s{f, k, init, 5e-3, 6.0};
    FrontSet fs(s);
    double m0 = profile_mass(fs.profile(), 0.0, -60.0, 60.0);
    double worst = 0.0;
    double lo = 0.0, hi = 0.55;
    bool in_range = true;
    for (double t : {1.0, 2.5, 4.0, 6.0}) {
      fs.advance(t);
      auto p = fs.profile();
      worst = std::max(worst, std::abs(profile_mass(p, 0.0, -60.0, 60.0) - m0));
      for (double u : p.us)
        if (u < lo - 1e-12 || u > f.hi() + 1e-12) in_range = false;
      (void)hi;
    }
    c.expect_le(worst, 1e-10, "mass conservation");
    c.expect(in_range, "maximum principle");
  }

  // Self-similarity of 100 fuzzed fans.
  {
    bool ok = true;
    for (int rep = 0; rep < 100; ++rep) {
      double ul = U(rng), ur = U(rng), kl = K(rng), kr = K(rng);
      auto fan = solve_two_k(f, kl, ul, kr, ur);
      for (double xi : {-1.7, -0.4, 0.0, 0.3, 1.1}) {
        double u1 = fan.sample(f, xi);
        double u2 = fan.sample(f, (xi * 5.0) / 5.0);
        if (std::abs(u1 - u2) > 1e-13) ok = false;
      }
    }
    c.expect(ok, "self-similarity");
  }
  c.finish();
}

}  // namespace

int main(int argc, char** argv) {
  std::string only = argc > 1 ? argv[1] : "";
  auto want = [&](const char* tag) { return only.empty() || only == tag; };
  if (want("ac1")) ac1();
  if (want("ac2")) ac2();
  if (want("ac3")) ac3();
  if (want("ac4")) ac4();
  if (want("ac5")) ac5();
  if (want("ac6")) ac6();
  if (want("ac7")) ac7();
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
