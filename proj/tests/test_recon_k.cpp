#include <cmath>
#include <random>

#include "doctest.h"
#include "ft/recon_k.hpp"
#include "test_support.hpp"

using namespace ft;
using ftt::check_close;

namespace {

ObserverFactory factory_for(const FluxCurve& f, const SpatialCoeff& true_k,
                            double T, double delta = 1e-3) {
  return [=](const Profile& data) {
    return Observer(Scenario{f, true_k, data, delta, T}, T);
  };
}

}  // namespace

TEST_CASE("probe design") {
  auto f = FluxCurve::lwr();
  auto p = design_k_probe(f, 0.0, 1.0, 0.1, 1.0 / 3.0);
  check_close(p.i_lo, -0.1, 1e-15);  // lambda = max |f'| = 1
  check_close(p.i_hi, 1.1, 1e-15);
  CHECK(p.data.value_left(-0.5) == 0.0);
  CHECK(p.data.value_left(0.5) == 1.0 / 3.0);
  CHECK_THROWS(design_k_probe(f, 0.0, 1.0, 0.1, 0.5));   // at the maximizer
  CHECK_THROWS(design_k_probe(f, 0.0, 1.0, 0.1, 0.75));  // beyond it
}

TEST_CASE("pre-interaction time precedes the first collision") {
  auto f = FluxCurve::lwr();
  SpatialCoeff k({0.4, 0.6}, {1.0, 0.6, 1.0});
  auto p = design_k_probe(f, 0.0, 1.0, 0.5, 0.25);
  Scenario s{f, k, p.data, 1e-3, 0.5};
  Observer obs(s, 0.5);
  double tau = obs.pre_interaction_time();
  CHECK(tau > 0.0);
  FrontSet fs(s);
  CHECK(tau <= 0.5 * fs.next_event_time() + 1e-15);
}

TEST_CASE("anchor from the rightmost wave") {
  auto f = FluxCurve::lwr();
  const double u_t = 1.0 / 3.0;

  SUBCASE("rise in k: transmitted shock, exact recovery") {
    SpatialCoeff k({0.2}, {0.5, 1.25});
    auto p = design_k_probe(f, 0.0, 0.4, 0.3, u_t);
    Scenario s{f, k, p.data, 1e-3, 0.3};
    Observer obs(s, 0.3);
    double tau = obs.pre_interaction_time();
    auto snap = obs.snapshot(tau);
    double kap = anchor_last_kappa(f, snap, 0.2, p.i_hi, tau, u_t);
    check_close(kap, 1.25, 1e-10);
  }

  SUBCASE("drop in k: rarefaction edge, exact through the step states") {
    SpatialCoeff k({0.2}, {1.0, 0.45});
    auto p = design_k_probe(f, 0.0, 0.4, 0.3, u_t);
    Scenario s{f, k, p.data, 1e-3, 0.3};
    Observer obs(s, 0.3);
    double tau = obs.pre_interaction_time();
    auto snap = obs.snapshot(tau);
    double kap = anchor_last_kappa(f, snap, 0.2, p.i_hi, tau, u_t);
    check_close(kap, 0.45, 1e-10);
  }
}

TEST_CASE("coefficient recovery roundtrip") {
  auto f = FluxCurve::lwr();

  SUBCASE("no jumps: constant coefficient from the boundary fan") {
    SpatialCoeff k = SpatialCoeff::constant(0.8);
    auto rec = reconstruct_k(f, factory_for(f, k, 0.4), 0.0, 1.0, 0.4, 0.25);
    CHECK(rec.jump_positions.empty());
    REQUIRE(rec.coeff.values().size() == 1);
    check_close(rec.coeff.values()[0], 0.8, 1e-10);
  }

  SUBCASE("single jump with worked flux-matching states") {
    SpatialCoeff k({0.3}, {1.0, 5.0 / 9.0});
    auto rec = reconstruct_k(f, factory_for(f, k, 0.5), 0.0, 1.0, 0.5, 1.0 / 3.0);
    REQUIRE(rec.jump_positions.size() == 1);
    check_close(rec.jump_positions[0], 0.3, 1e-13);
    REQUIRE(rec.coeff.values().size() == 2);
    check_close(rec.coeff.values()[0], 1.0, 1e-10);
    check_close(rec.coeff.values()[1], 5.0 / 9.0, 1e-10);
    for (double r : rec.residuals) CHECK(std::abs(r) <= 1e-12);
  }

  SUBCASE("random staircases recover exactly") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> V(0.2, 2.0);
    std::uniform_int_distribution<int> N(1, 6);
    for (int rep = 0; rep < 6; ++rep) {
      int n = N(rng);
      std::vector<double> breaks, vals;
      for (int i = 0; i < n; ++i) breaks.push_back(0.1 + 0.8 * i / double(n));
      vals.push_back(V(rng));
      for (int i = 0; i < n; ++i) {
        double v = V(rng);
        while (std::abs(v - vals.back()) < 0.05) v = V(rng);
        vals.push_back(v);
      }
      SpatialCoeff k(breaks, vals);
      auto rec = reconstruct_k(f, factory_for(f, k, 0.5), 0.0, 1.0, 0.5, 0.25);
      REQUIRE(rec.jump_positions.size() == breaks.size());
      for (std::size_t i = 0; i < breaks.size(); ++i)
        check_close(rec.jump_positions[i], breaks[i], 1e-10);
      for (std::size_t i = 0; i < vals.size(); ++i)
        check_close(rec.coeff.values()[i], vals[i], 1e-8);
    }
  }
}

TEST_CASE("anchor is invariant under halving the observation time") {
  auto f = FluxCurve::lwr();
  SpatialCoeff k({0.25, 0.55}, {0.9, 1.4, 0.7});
  auto rec1 = reconstruct_k(f, factory_for(f, k, 0.5), 0.0, 1.0, 0.5, 0.25);

  // Same pipeline with tau' forced smaller via a shorter horizon.
  auto rec2 = reconstruct_k(f, factory_for(f, k, 0.5), 0.0, 1.0, 0.5 / 2.0, 0.25);
  REQUIRE(rec1.coeff.values().size() == rec2.coeff.values().size());
  for (std::size_t i = 0; i < rec1.coeff.values().size(); ++i)
    check_close(rec1.coeff.values()[i], rec2.coeff.values()[i], 1e-10);
}

TEST_CASE("re-simulation with the recovered coefficient reproduces the data") {
  auto f = FluxCurve::lwr();
  SpatialCoeff k({0.2, 0.5, 0.75}, {1.0, 0.55, 1.3, 0.8});
  const double T = 0.5;
  const double delta = 1e-3;
  auto rec = reconstruct_k(f, factory_for(f, k, T, delta), 0.0, 1.0, T, 0.25);

  auto probe = design_k_probe(f, 0.0, 1.0, T, 0.25);
  Scenario truth{f, k, probe.data, delta, T};
  Scenario recon{f, rec.coeff, probe.data, delta, T};
  double acc = 0.0;
  for (int i = 1; i <= 10; ++i) {
    double t = T * i / 10.0;
    acc += profile_l1_distance(evolve_profile(truth, t), evolve_profile(recon, t),
                               0.0, 1.0) *
           (T / 10.0);
  }
  CHECK(acc <= 1e-9);
}
