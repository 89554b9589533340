#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ft/observe.hpp"
#include "ft/spatial_coeff.hpp"

namespace ft {

enum class ObstructionStatus {
  Ok,
  HorizonTooShort,       // a required arrival is missing before T
  CongestionDetected,    // fully congested stretch inside (a,b)
  NoObstruction,         // traces never react: coefficient is ambient
  Inconsistent,          // malformed observation
};

/// Every observable the procedures read along the way, kept for reporting.
struct ObstructionIntermediates {
  double x_tilde = 0.0, y_tilde = 0.0, v_bar_a = 0.0;
  double tau_tilde = -1.0, tau_o = -1.0, tau_a = -1.0, tau_b = -1.0;
  double T1 = -1.0, T2 = -1.0;
  double v = 0.0, w = 0.0, w_prime = 0.0;
  double sigma_a = 0.0, sigma_b = 0.0;
  double omega = 0.0;
  double v_o = 0.0, v_1 = 0.0;
  bool verify_holds = false;
  double xi2_direct = 0.0, xi2_transit = 0.0;
};

struct ObstructionResult {
  ObstructionStatus status = ObstructionStatus::Inconsistent;
  Obstruction obstruction;
  bool unique = false;
  ObstructionIntermediates mid;
  std::string note;

  bool ok() const { return status == ObstructionStatus::Ok; }
};

/// Observable ambient description for the stationary-data problem.
struct StationaryAmbient {
  double k_o = 1.0;
  double a = 0.0, b = 1.0;
  double u_oa = 0.0, u_ob = 0.0;  // initial plateau states at a+ and b+
};

struct StationaryProbe {
  Profile left_data;  // replaces the initial data on (-inf, a)
  double x_tilde = 0.0, y_tilde = 0.0;
  double v_bar_a = 0.0;
  double fan_center = 0.0;  // origin of the emptying rarefaction
  double u_base = 0.0;      // state level the fan climbs from
};

/// Emptying probe: the maximizer plateau, a zero-flux stretch whose length
/// guarantees the fan stays clear until the sweep finishes, then the ambient
/// value up to a. Throws on u_oa == u^m; ambient u2 values are reported as
/// congestion by the reconstruction instead.
StationaryProbe probe_stationary(const FluxCurve& f, const StationaryAmbient& amb,
                                 double x_tilde);

/// Faster probe (no emptying stage) for max(u_oa, u_ob) < u^m.
StationaryProbe probe_fast(const FluxCurve& f, const StationaryAmbient& amb,
                           double x_tilde);

/// Builds a partial observer for the scenario whose data left of `a` is
/// replaced by the given profile (the true coefficient and the stationary
/// tail stay hidden behind the observation interface).
using PartialObserverFactory = std::function<Observer(const Profile& left_data)>;

/// Theorem-3 style reconstruction from the emptying probe.
ObstructionResult reconstruct_stationary(const FluxCurve& f,
                                         const StationaryAmbient& amb,
                                         double x_tilde,
                                         const PartialObserverFactory& factory);

/// Adaptive fast procedure: try the no-emptying probe; on detecting a
/// previously congested stretch restart with the emptying probe.
struct FastOutcome {
  ObstructionResult result;
  bool restarted = false;  // congestion suspected, emptying probe used
};
FastOutcome reconstruct_fast(const FluxCurve& f, const StationaryAmbient& amb,
                             double x_tilde, const PartialObserverFactory& factory);

/// Runs a stationary reconstruction at two front-tracking resolutions and
/// Richardson-extrapolates the recovered parameters (the time-based ones
/// carry an O(delta) bias).
ObstructionResult reconstruct_stationary_extrapolated(
    const FluxCurve& f, const StationaryAmbient& amb, double x_tilde,
    const std::function<Observer(const Profile&, double delta)>& factory,
    double delta);

// ---------------------------------------------------------------------------
// Constant-data problem (Theorem 4)

enum class ConstantCase { Reflective, Transmissive, Invisible };

struct ConstantClassification {
  ConstantCase kind = ConstantCase::Invisible;
  std::optional<WaveArrival> at_a;  // reflected shock arrival
  std::optional<WaveArrival> at_b;  // transmitted shock arrival
};

ConstantClassification classify_constant_case(const Observer& obs, double u_bar,
                                              double a, double b);

/// Reconstruction from a constant initial state. The report carries both
/// the direct back-tracing xi2 and the transit-relation value when the
/// interaction check fails.
ObstructionResult reconstruct_constant(const FluxCurve& f, double k_o, double a,
                                       double b, double u_bar, const Observer& obs);

ObstructionResult reconstruct_constant_extrapolated(
    const FluxCurve& f, double k_o, double a, double b, double u_bar,
    const std::function<Observer(double delta)>& factory, double delta);

/// Pure-arithmetic reflective path: feeds given arrival observations through
/// the constant-data formulas without any simulation (fixture entry point).
ObstructionResult reconstruct_constant_from_arrivals(
    const FluxCurve& f, double k_o, double a, double b, double u_bar, double T1,
    double v_o, double sigma_a, double T2, double v_1, double sigma_b);

}  // namespace ft
