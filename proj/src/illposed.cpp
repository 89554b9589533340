#include "ft/illposed.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ft {

SpatialCoeff SpanCoeff::coefficient() const {
  std::vector<double> breaks{xi};
  std::vector<double> vals{k_ambient};
  double x = xi;
  for (std::size_t i = 0; i < chi.size(); ++i) {
    vals.push_back(values[i]);
    x += chi[i];
    breaks.push_back(x);
  }
  vals.push_back(k_ambient);
  return SpatialCoeff(breaks, vals);
}

double SpanCoeff::transit_sum() const {
  double s = 0.0;
  for (std::size_t i = 0; i < chi.size(); ++i) s += chi[i] / values[i];
  return s;
}

SpanCoeff widen_family(const SpanCoeff& base, double eps, double window_hi) {
  if (base.chi.size() != 2) throw std::invalid_argument("widen_family: need two spans");
  if (!(base.values[0] < base.values[1] && base.values[1] < base.k_ambient))
    throw std::invalid_argument("widen_family: need k1 < k2 < k_o");
  if (eps < 0.0) throw std::invalid_argument("widen_family: eps must be >= 0");
  double chi2 = base.chi[1], k2 = base.values[1], ko = base.k_ambient;
  double end = base.xi + base.chi[0] + chi2 + eps;
  if (end > window_hi)
    throw std::invalid_argument("widen_family: widened support leaves the window");
  if (eps == 0.0) return base;
  double k_eps = (chi2 + eps) / (chi2 / k2 + eps / ko);
  SpanCoeff out = base;
  out.chi[1] = chi2 + eps;
  out.values[1] = k_eps;
  return out;
}

SpanCoeff shift_family(const SpanCoeff& base, double rho) {
  if (base.chi.size() != 2) throw std::invalid_argument("shift_family: need two spans");
  if (!(base.values[0] < base.values[1] && base.values[1] < base.k_ambient))
    throw std::invalid_argument("shift_family: need k1 < k2 < k_o");
  if (rho < 0.0 || rho >= base.chi[0])
    throw std::invalid_argument("shift_family: need 0 <= rho < chi1");
  if (rho == 0.0) return base;
  double chi2 = base.chi[1], k1 = base.values[0], k2 = base.values[1];
  double k_rho = (chi2 + rho) / (chi2 / k2 + rho / k1);
  SpanCoeff out = base;
  out.chi[0] -= rho;
  out.chi[1] = chi2 + rho;
  out.values[1] = k_rho;
  return out;
}

MergeResult merge_family(const SpanCoeff& base) {
  if (base.chi.size() != 3) throw std::invalid_argument("merge_family: need three spans");
  double k1 = base.values[0], k2 = base.values[1], k3 = base.values[2];
  if (!(0.0 < k1 && k1 < k2 && k2 < k3 && k3 < base.k_ambient))
    throw std::invalid_argument("merge_family: need 0 < k1 < k2 < k3 < k_o");
  double chi1 = base.chi[0], chi2 = base.chi[1], chi3 = base.chi[2];

  MergeResult r;
  double t23 = chi2 / k2 + chi3 / k3;
  r.ell = (chi2 + chi3) / t23;
  r.merged = base;
  r.merged.chi = {chi1, chi2 + chi3};
  r.merged.values = {k1, r.ell};

  double t_all = chi1 / k1 + t23;
  r.ell_prime = (chi1 + chi2 + chi3) / t_all;
  r.single = base;
  r.single.chi = {chi1 + chi2 + chi3};
  r.single.values = {r.ell_prime};
  return r;
}

SpanCoeff swap_family(const SpanCoeff& base) {
  if (base.chi.size() != 3) throw std::invalid_argument("swap_family: need three spans");
  SpanCoeff out = base;
  std::swap(out.chi[1], out.chi[2]);
  std::swap(out.values[1], out.values[2]);
  return out;
}

IndistinguishabilityReport indistinguishable(const FluxCurve& f,
                                             const SpatialCoeff& coeff_a,
                                             const SpatialCoeff& coeff_b,
                                             double a, double b,
                                             const Profile& data, double T,
                                             double delta, double threshold) {
  auto run = [&](const SpatialCoeff& k) {
    Scenario s{f, k, data, delta, T};
    FrontSet fs(s);
    fs.add_probe(a);
    fs.add_probe(b);
    fs.advance(T);
    return fs;
  };
  FrontSet fa = run(coeff_a);
  FrontSet fb = run(coeff_b);
  IndistinguishabilityReport rep;
  rep.deviation_l1 = trace_l1_distance(fa.trace(a), fb.trace(a), T) +
                     trace_l1_distance(fa.trace(b), fb.trace(b), T);
  rep.deviation_sup = std::max(trace_sup_distance(fa.trace(a), fb.trace(a), T),
                               trace_sup_distance(fa.trace(b), fb.trace(b), T));
  rep.indistinguishable = rep.deviation_l1 <= threshold;
  return rep;
}

}  // namespace ft
