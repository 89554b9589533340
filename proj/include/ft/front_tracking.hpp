#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ft/flux_curve.hpp"
#include "ft/riemann.hpp"
#include "ft/spatial_coeff.hpp"

namespace ft {

/// Piecewise-constant state profile: strictly increasing breakpoints, one
/// value per cell, outermost values extending to +/- infinity.
struct Profile {
  std::vector<double> xs;
  std::vector<double> us;

  static Profile constant(double u) { return Profile{{}, {u}}; }
  static Profile riemann(double u_left, double u_right, double x0 = 0.0) {
    return Profile{{x0}, {u_left, u_right}};
  }

  double value_left(double x) const;
  double value_right(double x) const;
  void validate() const;
};

double profile_l1_distance(const Profile& p, const Profile& q, double lo, double hi);
/// Integral of (u - u_ref) over [lo, hi].
double profile_mass(const Profile& p, double u_ref, double lo, double hi);
/// Profile equal to `left` on (-inf, x_cut) and `right` on (x_cut, inf).
Profile splice_profiles(const Profile& left, const Profile& right, double x_cut);

struct Scenario {
  FluxCurve f;
  SpatialCoeff k;
  Profile initial;
  double delta = 1e-2;   // rarefaction step width (state units)
  double horizon = 1.0;  // advertised time horizon T

  void validate() const;
};

/// Time series of the two one-sided spatial limits of u at a fixed probe
/// position. Entries are recorded at the exact front-crossing times; between
/// entries both limits are constant.
struct ObservationTrace {
  double x = 0.0;
  struct Entry {
    double t;
    double inst_left, inst_right;  // limits at the crossing instant
    double left, right;            // limits holding until the next entry
  };
  std::vector<Entry> entries;

  double left(double t) const;
  double right(double t) const;
  /// First entry time > t_after whose post-state satisfies pred(left,right).
  std::optional<std::size_t> first_entry_after(
      double t_after, const std::function<bool(double, double)>& pred) const;
};

/// Integral over [0,T] of |a(t) - b(t)| using the left limits of two traces
/// at the same probe.
double trace_l1_distance(const ObservationTrace& a, const ObservationTrace& b,
                         double T);
double trace_sup_distance(const ObservationTrace& a, const ObservationTrace& b,
                          double T);

/// Event-driven exact evolution of piecewise-constant data. Fronts move on
/// straight lines between collisions; every collision (including hits on the
/// stationary coefficient fronts) is re-solved with the Riemann solver.
/// Rarefactions are discretized into steps of state width <= delta, each
/// step moving at the Rankine-Hugoniot chord speed of its endpoint states
/// (front tracking with a piecewise-linear interpolated flux).
class FrontSet {
 public:
  explicit FrontSet(Scenario s);

  /// Probes must be registered before the first advance.
  void add_probe(double x);

  void advance(double t_target);

  double time() const { return time_; }
  long long event_count() const { return events_; }
  Profile profile() const;
  const ObservationTrace& trace(double x) const;

  /// Earliest pending collision time (+inf when none). Does not advance.
  double next_event_time() const;

  struct FrontView {
    double pos, speed, u_left, u_right, k_left, k_right;
    int kind;  // 0 shock, 1 rarefaction step, 2 k-front
  };
  std::vector<FrontView> fronts() const;

  const Scenario& scenario() const { return scn_; }

 private:
  struct Node {
    double x_ref = 0.0, t_ref = 0.0, speed = 0.0;
    double ul = 0.0, ur = 0.0;
    double kl = 0.0, kr = 0.0;
    int kind = 0;
    bool alive = false;
    unsigned version = 0;
    int prev = -1, next = -1;
    double pos(double t) const { return x_ref + speed * (t - t_ref); }
  };
  struct Event {
    double t;
    int a, b;
    unsigned va, vb;
    bool operator<(const Event& o) const { return t > o.t; }  // min-heap
  };
  struct Probe {
    double x;
    int cursor = -2;  // -2: unset, -1: left of all fronts, >=0 node id
    double t_done = 0.0;
    ObservationTrace trace;
  };

  Scenario scn_;
  std::vector<Node> nodes_;
  int head_ = -1;
  double time_ = 0.0;
  long long events_ = 0;
  std::vector<Event> heap_;
  std::vector<Probe> probes_;
  bool started_ = false;

  int new_node(const Node& n);
  void kill(int id);
  double far_left_u() const;
  void schedule(int a, int b);
  std::optional<double> collision_time(int a, int b, double now) const;
  void insert_fan_nodes(const WaveFan& fan, double x, double t, int after,
                        std::vector<int>* created);
  void emit_rarefaction_steps(double ul, double ur, double k, double x, double t,
                              std::vector<Node>& out) const;
  void initialize();
  void process_event(const Event& ev);
  void probes_to(double t_end);
  void probe_record_event(Probe& p, double t, double x_event);
  void probe_steady(const Probe& p, double t, double& l, double& r) const;
  void reset_cursor(Probe& p, double t);
};

/// Convenience: run a scenario to time t and return the profile.
Profile evolve_profile(const Scenario& s, double t);

}  // namespace ft
