#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "ft/front_tracking.hpp"

namespace ft {

struct AccessViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Snapshot with the cells of an unobservable window withheld. One-sided
/// limits at the window endpoints remain available: they are what sensors
/// placed at the ends of the hidden stretch measure.
class MaskedProfile {
 public:
  MaskedProfile(Profile p, std::optional<std::pair<double, double>> mask);

  bool masked(double x) const;
  double value_left(double x) const;
  double value_right(double x) const;
  const std::optional<std::pair<double, double>>& mask() const { return mask_; }

  /// Breakpoints outside the mask (the visible discontinuity set).
  std::vector<double> visible_breakpoints() const;
  /// Adjacent states of a visible breakpoint.
  std::pair<double, double> states_at(double x) const;

 private:
  Profile full_;
  std::optional<std::pair<double, double>> mask_;
  void check(double x) const;
};

struct WaveArrival {
  double probe = 0.0;
  double time = 0.0;
  double u_left = 0.0, u_right = 0.0;  // states across the arriving wave
  double speed = 0.0;                  // measured from post-arrival snapshots
  enum class Kind { Shock, RarefactionEdge } kind = Kind::Shock;
};

/// Observation oracle over one scenario: full observability (snapshots
/// anywhere, any probe) or partial observability (everything outside a
/// window (a,b); probes inside refused). All queries are honest: values come
/// from sampled solutions, speeds from differencing snapshots, never from
/// solver internals. The single exception is pre_interaction_time, which
/// realizes the "small enough time" of the full-observability procedure
/// from the pending-event queue.
class Observer {
 public:
  Observer(Scenario s, double T);                          // full mode
  Observer(Scenario s, double T, double a, double b);      // partial mode

  bool partial() const { return mask_.has_value(); }
  double horizon() const { return T_; }
  const Scenario& scenario() const { return scn_; }
  const std::optional<std::pair<double, double>>& mask() const { return mask_; }

  MaskedProfile snapshot(double t) const;
  const ObservationTrace& trace(double x) const;

  /// Earliest trace time > t0 at which the post-state at the probe
  /// satisfies pred; nullopt when the predicate never fires before T.
  std::optional<WaveArrival> first_arrival(
      double x, const std::function<bool(double)>& pred, double t0) const;

  /// Stationary discontinuities in [j_lo, j_hi]: positions where both
  /// snapshots show the same genuine jump with identical adjacent states.
  std::vector<double> stationary_jumps(double t1, double t2, double j_lo,
                                       double j_hi) const;

  /// Half the earliest pending collision time of the initial wave fans,
  /// capped at the horizon (full mode only).
  double pre_interaction_time() const;

 private:
  Scenario scn_;
  double T_;
  std::optional<std::pair<double, double>> mask_;
  mutable std::map<long long, Profile> snap_cache_;
  mutable std::map<long long, std::shared_ptr<FrontSet>> trace_cache_;

  const Profile& raw_snapshot(double t) const;
  void check_probe(double x) const;
  double measure_speed(double t_arr, double probe, double u_left, double u_right,
                       bool moving_left) const;
};

}  // namespace ft
