#pragma once

#include <vector>

#include "ft/flux_curve.hpp"

namespace ft {

/// One piece of an envelope: either an affine chord bridging [u0,u1] or a
/// contact arc where the envelope coincides with f.
struct EnvelopeSegment {
  double u0, u1;
  bool chord;
  double slope() const { return slope_; }
  double slope_ = 0.0;  // chord slope (chords only)
};

struct Envelope {
  bool lower;  // true: convex-from-below, false: concave-from-above
  std::vector<EnvelopeSegment> segments;  // ordered by increasing u

  double value(const FluxCurve& f, double u) const;
  /// Contact test: does the envelope touch f at u?
  bool in_contact(double u, double tol) const;
};

/// Convex (lower=true) or concave (lower=false) envelope of f on [u_lo,u_hi].
/// Exact for piecewise-linear fluxes; for smooth curves a dense hull is
/// refined by tangency root-finding so that chord endpoints are accurate to
/// root tolerance.
Envelope build_envelope(const FluxCurve& f, double u_lo, double u_hi, bool lower);

}  // namespace ft
