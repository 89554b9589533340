#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ft {

using State = double;
using Flux = double;

struct KindMismatchError : std::logic_error {
  using std::logic_error::logic_error;
};
struct NoSolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Branch { Increasing, Decreasing };

/// A flux nonlinearity f on a compact state interval [lo, hi].
///
/// Three kinds are supported:
///  - ConcaveH1: strictly concave, f(lo)=f(hi)=0, f>0 inside, with a unique
///    interior maximizer. This is the class every two-coefficient solver
///    and reconstruction procedure relies on.
///  - General: continuous, piecewise C^1 with finitely many inflection
///    points; supplied as evaluator + derivative callbacks or as a dense
///    sample table (>= 1024 points, monotone-cubic reconstruction).
///  - PiecewiseLinear: the interpolant of a finite node list; used both as
///    an input class and as the output of flux reconstruction.
class FluxCurve {
 public:
  enum class Kind { ConcaveH1, General, PiecewiseLinear };

  FluxCurve() = default;

  // f(u) = scale * u * (root - u) on [0, root]; closed-form inverses.
  static FluxCurve concave_quadratic(double scale, double root);
  // The classical u(1-u) on [0,1].
  static FluxCurve lwr() { return concave_quadratic(1.0, 1.0); }

  static FluxCurve concave(std::function<double(double)> f,
                           std::function<double(double)> df, double lo,
                           double hi, double lip_df);

  static FluxCurve general(std::function<double(double)> f,
                           std::function<double(double)> df, double lo,
                           double hi, double lip_df,
                           std::vector<double> inflections = {});

  static FluxCurve piecewise_linear(std::vector<std::pair<double, double>> nodes);

  // Dense table (strictly increasing u, >= 1024 samples); values are
  // reconstructed with a monotonicity-preserving cubic.
  static FluxCurve from_samples(const std::vector<double>& u,
                                const std::vector<double>& f);

  double operator()(double u) const { return eval_(u); }
  double value(double u) const { return eval_(u); }
  double deriv(double u) const { return deriv_(u); }

  Kind kind() const { return kind_; }
  bool concave_h1() const { return kind_ == Kind::ConcaveH1; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  /// Unique maximizer u^m of a ConcaveH1 curve.
  double maximizer() const;
  double max_value() const;

  /// Solves f(u) = y on the requested monotone branch of a ConcaveH1 curve.
  /// Throws NoSolutionError when y exceeds the maximum (congestion signal)
  /// and std::domain_error for y < 0.
  double branch_inverse(double y, Branch branch) const;

  /// The state on the opposite branch with the same flux value.
  double companion(double u) const;

  /// Upper bound for |f'| on [lo, hi].
  double max_abs_deriv() const;
  /// Lipschitz bound for f' on [lo, hi] (per smooth piece).
  double lipschitz_deriv() const { return lip_df_; }

  const std::vector<double>& inflection_points() const { return inflections_; }

  /// Piecewise-linear curves expose their nodes.
  const std::vector<std::pair<double, double>>& nodes() const;

  void check_domain(double u) const;

 private:
  Kind kind_ = Kind::General;
  double lo_ = 0.0, hi_ = 1.0;
  std::function<double(double)> eval_;
  std::function<double(double)> deriv_;
  double lip_df_ = 0.0;
  std::vector<double> inflections_;
  std::vector<std::pair<double, double>> nodes_;  // PiecewiseLinear only

  // ConcaveH1 cache
  double um_ = 0.0, fum_ = 0.0;
  bool quadratic_ = false;
  double quad_scale_ = 0.0, quad_root_ = 0.0;

  void finalize_concave();
  void validate_concave() const;
  void validate_derivative() const;
};

/// Upper bound of the Lipschitz constant of f-g on their common domain.
/// Exact (over the node union) for two piecewise-linear curves; otherwise a
/// dense-grid maximum of |f'-g'| with a refinement safety margin.
double lip_of_difference(const FluxCurve& f, const FluxCurve& g);

}  // namespace ft
