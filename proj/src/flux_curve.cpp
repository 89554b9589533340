#include "ft/flux_curve.hpp"

#include <algorithm>
#include <cmath>

#include "ft/constants.hpp"

namespace ft {

namespace {

// Bisection for a strictly decreasing function g on [a,b] with g(a)>0>g(b).
double bisect_decreasing(const std::function<double(double)>& g, double a,
                         double b) {
  double ga = g(a);
  double gb = g(b);
  if (ga < 0.0) return a;
  if (gb > 0.0) return b;
  for (int it = 0; it < 200 && (b - a) > tol::root * 0.01; ++it) {
    double m = 0.5 * (a + b);
    double gm = g(m);
    if (gm > 0.0) {
      a = m;
      ga = gm;
    } else {
      b = m;
      gb = gm;
    }
  }
  (void)ga;
  (void)gb;
  return 0.5 * (a + b);
}

}  // namespace

FluxCurve FluxCurve::concave_quadratic(double scale, double root) {
  if (scale <= 0.0 || root <= 0.0)
    throw std::invalid_argument("concave_quadratic: scale and root must be positive");
  FluxCurve c;
  c.kind_ = Kind::ConcaveH1;
  c.lo_ = 0.0;
  c.hi_ = root;
  c.eval_ = [scale, root](double u) { return scale * u * (root - u); };
  c.deriv_ = [scale, root](double u) { return scale * (root - 2.0 * u); };
  c.lip_df_ = 2.0 * scale;
  c.quadratic_ = true;
  c.quad_scale_ = scale;
  c.quad_root_ = root;
  c.um_ = 0.5 * root;
  c.fum_ = scale * 0.25 * root * root;
  return c;
}

FluxCurve FluxCurve::concave(std::function<double(double)> f,
                             std::function<double(double)> df, double lo,
                             double hi, double lip_df) {
  FluxCurve c;
  c.kind_ = Kind::ConcaveH1;
  c.lo_ = lo;
  c.hi_ = hi;
  c.eval_ = std::move(f);
  c.deriv_ = std::move(df);
  c.lip_df_ = lip_df;
  c.finalize_concave();
  c.validate_concave();
  c.validate_derivative();
  return c;
}

FluxCurve FluxCurve::general(std::function<double(double)> f,
                             std::function<double(double)> df, double lo,
                             double hi, double lip_df,
                             std::vector<double> inflections) {
  FluxCurve c;
  c.kind_ = Kind::General;
  c.lo_ = lo;
  c.hi_ = hi;
  c.eval_ = std::move(f);
  c.deriv_ = std::move(df);
  c.lip_df_ = lip_df;
  c.inflections_ = std::move(inflections);
  std::sort(c.inflections_.begin(), c.inflections_.end());
  c.validate_derivative();
  return c;
}

FluxCurve FluxCurve::piecewise_linear(std::vector<std::pair<double, double>> nodes) {
  if (nodes.size() < 2)
    throw std::invalid_argument("piecewise_linear: need at least two nodes");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i].first > nodes[i - 1].first))
      throw std::invalid_argument("piecewise_linear: abscissas must be strictly increasing");
  FluxCurve c;
  c.kind_ = Kind::PiecewiseLinear;
  c.lo_ = nodes.front().first;
  c.hi_ = nodes.back().first;
  c.nodes_ = std::move(nodes);
  auto nd = c.nodes_;
  c.eval_ = [nd](double u) {
    auto it = std::upper_bound(nd.begin(), nd.end(), u,
                               [](double x, const auto& n) { return x < n.first; });
    std::size_t j = std::min<std::size_t>(
        nd.size() - 1,
        std::max<std::size_t>(1, static_cast<std::size_t>(it - nd.begin())));
    double t = (u - nd[j - 1].first) / (nd[j].first - nd[j - 1].first);
    return nd[j - 1].second + t * (nd[j].second - nd[j - 1].second);
  };
  c.deriv_ = [nd](double u) {
    auto it = std::upper_bound(nd.begin(), nd.end(), u,
                               [](double x, const auto& n) { return x < n.first; });
    std::size_t j = std::min<std::size_t>(
        nd.size() - 1,
        std::max<std::size_t>(1, static_cast<std::size_t>(it - nd.begin())));
    return (nd[j].second - nd[j - 1].second) / (nd[j].first - nd[j - 1].first);
  };
  // Slope changes are jumps; the per-piece derivative is constant.
  c.lip_df_ = 0.0;
  return c;
}

FluxCurve FluxCurve::from_samples(const std::vector<double>& u,
                                  const std::vector<double>& f) {
  if (u.size() != f.size())
    throw std::invalid_argument("from_samples: size mismatch");
  if (u.size() < 1024)
    throw std::invalid_argument("from_samples: need at least 1024 samples");
  for (std::size_t i = 1; i < u.size(); ++i)
    if (!(u[i] > u[i - 1]))
      throw std::invalid_argument("from_samples: u must be strictly increasing");

  // Fritsch-Carlson monotone cubic slopes.
  const std::size_t n = u.size();
  std::vector<double> h(n - 1), s(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = u[i + 1] - u[i];
    s[i] = (f[i + 1] - f[i]) / h[i];
  }
  m[0] = s[0];
  m[n - 1] = s[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (s[i - 1] * s[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      double w1 = 2.0 * h[i] + h[i - 1];
      double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
    }
  }

  auto us = u;
  auto fs = f;
  auto ms = m;
  auto locate = [us](double x) {
    auto it = std::upper_bound(us.begin(), us.end(), x);
    std::size_t j = static_cast<std::size_t>(it - us.begin());
    if (j == 0) j = 1;
    if (j >= us.size()) j = us.size() - 1;
    return j;
  };
  auto eval = [us, fs, ms, locate](double x) {
    std::size_t j = locate(x);
    double hh = us[j] - us[j - 1];
    double t = (x - us[j - 1]) / hh;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * fs[j - 1] + h10 * hh * ms[j - 1] + h01 * fs[j] + h11 * hh * ms[j];
  };
  auto deriv = [us, fs, ms, locate](double x) {
    std::size_t j = locate(x);
    double hh = us[j] - us[j - 1];
    double t = (x - us[j - 1]) / hh;
    double t2 = t * t;
    double d00 = (6 * t2 - 6 * t) / hh, d10 = 3 * t2 - 4 * t + 1;
    double d01 = (-6 * t2 + 6 * t) / hh, d11 = 3 * t2 - 2 * t;
    return d00 * fs[j - 1] + d10 * ms[j - 1] + d01 * fs[j] + d11 * ms[j];
  };

  // Estimate Lip(f') from second differences.
  double lip = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i)
    lip = std::max(lip, std::abs(s[i] - s[i - 1]) / (0.5 * (h[i] + h[i - 1])));

  FluxCurve c;
  c.kind_ = Kind::General;
  c.lo_ = u.front();
  c.hi_ = u.back();
  c.eval_ = eval;
  c.deriv_ = deriv;
  c.lip_df_ = lip * 1.25;
  return c;
}

void FluxCurve::finalize_concave() {
  // f' is strictly decreasing; locate its sign change.
  um_ = bisect_decreasing(deriv_, lo_, hi_);
  fum_ = eval_(um_);
}

void FluxCurve::validate_concave() const {
  const int n = 257;
  double f_lo = eval_(lo_), f_hi = eval_(hi_);
  double scale = std::max(1.0, std::abs(fum_));
  if (std::abs(f_lo) > 1e-9 * scale || std::abs(f_hi) > 1e-9 * scale)
    throw std::invalid_argument("concave flux must vanish at both domain endpoints");
  double prev_d = deriv_(lo_);
  for (int i = 1; i < n; ++i) {
    double u = lo_ + (hi_ - lo_) * i / (n - 1.0);
    double d = deriv_(u);
    if (d >= prev_d + 1e-12)
      throw std::invalid_argument("concave flux requires strictly decreasing derivative");
    prev_d = d;
    if (i < n - 1 && eval_(u) <= 0.0)
      throw std::invalid_argument("concave flux must be positive inside the domain");
  }
}

void FluxCurve::validate_derivative() const {
  const int n = 97;
  const double h = (hi_ - lo_) * 1e-7;
  for (int i = 1; i < n - 1; ++i) {
    double u = lo_ + (hi_ - lo_) * i / (n - 1.0);
    // Skip sample points too close to a kink or inflection seam.
    bool near_seam = false;
    for (double p : inflections_)
      if (std::abs(u - p) < 2 * h) near_seam = true;
    if (near_seam) continue;
    double fd = (eval_(u + h) - eval_(u - h)) / (2.0 * h);
    if (std::abs(fd - deriv_(u)) > 1e-6 * std::max(1.0, std::abs(deriv_(u))))
      throw std::invalid_argument("derivative callback disagrees with finite difference");
  }
}

double FluxCurve::maximizer() const {
  if (kind_ != Kind::ConcaveH1)
    throw KindMismatchError("maximizer requires a concave flux");
  return um_;
}

double FluxCurve::max_value() const {
  if (kind_ != Kind::ConcaveH1)
    throw KindMismatchError("max_value requires a concave flux");
  return fum_;
}

double FluxCurve::branch_inverse(double y, Branch branch) const {
  if (kind_ != Kind::ConcaveH1)
    throw KindMismatchError("branch_inverse requires a concave flux");
  if (y < -tol::root) throw std::domain_error("branch_inverse: negative flux value");
  y = std::max(y, 0.0);
  if (y > fum_ * (1.0 + 1e-12) + tol::root)
    throw NoSolutionError("branch_inverse: value exceeds the flux maximum");
  y = std::min(y, fum_);
  if (quadratic_) {
    // scale*u*(root-u) = y  =>  u = (root -/+ sqrt(root^2 - 4 y/scale))/2
    double disc = quad_root_ * quad_root_ - 4.0 * y / quad_scale_;
    disc = std::max(disc, 0.0);
    double r = std::sqrt(disc);
    return branch == Branch::Increasing ? 0.5 * (quad_root_ - r)
                                        : 0.5 * (quad_root_ + r);
  }
  if (branch == Branch::Increasing) {
    auto g = [&](double u) { return y - eval_(u); };  // decreasing in u? no:
    // f increases on [lo, um], so y - f(u) decreases; bisect that.
    return bisect_decreasing(g, lo_, um_);
  }
  auto g = [&](double u) { return eval_(u) - y; };  // decreasing on [um, hi]
  return bisect_decreasing(g, um_, hi_);
}

double FluxCurve::companion(double u) const {
  check_domain(u);
  if (kind_ != Kind::ConcaveH1)
    throw KindMismatchError("companion requires a concave flux");
  if (quadratic_) return quad_root_ - u;
  Branch other = (u <= um_) ? Branch::Decreasing : Branch::Increasing;
  return branch_inverse(eval_(u), other);
}

double FluxCurve::max_abs_deriv() const {
  if (kind_ == Kind::ConcaveH1 || kind_ == Kind::PiecewiseLinear ||
      !inflections_.empty()) {
    // Monotone derivative per piece: extremes live at piece boundaries.
    std::vector<double> pts{lo_, hi_};
    for (double p : inflections_) pts.push_back(p);
    if (kind_ == Kind::PiecewiseLinear)
      for (auto& n : nodes_) pts.push_back(n.first);
    double m = 0.0;
    for (double p : pts) {
      double q = std::clamp(p, lo_, hi_);
      m = std::max({m, std::abs(deriv_(std::nextafter(q, hi_))),
                    std::abs(deriv_(std::nextafter(q, lo_)))});
    }
    return m;
  }
  double m = 0.0;
  const int n = 4097;
  for (int i = 0; i <= n; ++i)
    m = std::max(m, std::abs(deriv_(lo_ + (hi_ - lo_) * i / double(n))));
  return m * 1.0001 + lip_df_ * (hi_ - lo_) / n;
}

const std::vector<std::pair<double, double>>& FluxCurve::nodes() const {
  if (kind_ != Kind::PiecewiseLinear)
    throw KindMismatchError("nodes() requires a piecewise-linear flux");
  return nodes_;
}

void FluxCurve::check_domain(double u) const {
  if (u < lo_ - tol::state_eq || u > hi_ + tol::state_eq)
    throw std::domain_error("state outside the flux domain");
}

double lip_of_difference(const FluxCurve& f, const FluxCurve& g) {
  if (std::abs(f.lo() - g.lo()) > tol::state_eq ||
      std::abs(f.hi() - g.hi()) > tol::state_eq)
    throw std::invalid_argument("lip_of_difference: domains differ");

  if (f.kind() == FluxCurve::Kind::PiecewiseLinear &&
      g.kind() == FluxCurve::Kind::PiecewiseLinear) {
    std::vector<double> knots{f.lo(), f.hi()};
    for (auto& n : f.nodes()) knots.push_back(n.first);
    for (auto& n : g.nodes()) knots.push_back(n.first);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      double mid = 0.5 * (knots[i] + knots[i + 1]);
      m = std::max(m, std::abs(f.deriv(mid) - g.deriv(mid)));
    }
    return m;
  }

  auto grid_max = [&](int n) {
    double m = 0.0;
    for (int i = 0; i <= n; ++i) {
      double u = f.lo() + (f.hi() - f.lo()) * i / double(n);
      m = std::max(m, std::abs(f.deriv(u) - g.deriv(u)));
    }
    return m;
  };
  double m1 = grid_max(2048);
  double m2 = grid_max(4096);
  return m2 + std::max(0.0, m2 - m1) + 1e-15;
}

}  // namespace ft
