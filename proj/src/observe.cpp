#include "ft/observe.hpp"

#include <algorithm>
#include <cmath>

#include "ft/constants.hpp"

namespace ft {

namespace {
long long time_key(double t) { return std::llround(t * 1e12); }
}  // namespace

// ---------------------------------------------------------------------------
// MaskedProfile

MaskedProfile::MaskedProfile(Profile p, std::optional<std::pair<double, double>> mask)
    : full_(std::move(p)), mask_(std::move(mask)) {}

bool MaskedProfile::masked(double x) const {
  return mask_ && x > mask_->first && x < mask_->second;
}

void MaskedProfile::check(double x) const {
  if (masked(x)) throw AccessViolation("snapshot query inside the unobservable window");
}

double MaskedProfile::value_left(double x) const {
  check(x);
  return full_.value_left(x);
}

double MaskedProfile::value_right(double x) const {
  check(x);
  return full_.value_right(x);
}

std::vector<double> MaskedProfile::visible_breakpoints() const {
  std::vector<double> out;
  for (double x : full_.xs)
    if (!masked(x)) out.push_back(x);
  return out;
}

std::pair<double, double> MaskedProfile::states_at(double x) const {
  check(x);
  return {full_.value_left(x), full_.value_right(x)};
}

// ---------------------------------------------------------------------------
// Observer

Observer::Observer(Scenario s, double T) : scn_(std::move(s)), T_(T) {}

Observer::Observer(Scenario s, double T, double a, double b)
    : scn_(std::move(s)), T_(T), mask_(std::make_pair(a, b)) {
  if (!(a < b)) throw std::invalid_argument("Observer: mask requires a < b");
}

const Profile& Observer::raw_snapshot(double t) const {
  if (t < 0.0 || t > T_ + 1e-12)
    throw std::invalid_argument("snapshot time outside [0, T]");
  auto key = time_key(t);
  auto it = snap_cache_.find(key);
  if (it != snap_cache_.end()) return it->second;
  FrontSet fs(scn_);
  fs.advance(t);
  return snap_cache_.emplace(key, fs.profile()).first->second;
}

MaskedProfile Observer::snapshot(double t) const {
  return MaskedProfile(raw_snapshot(t), mask_);
}

void Observer::check_probe(double x) const {
  if (mask_ && x > mask_->first && x < mask_->second)
    throw AccessViolation("probe inside the unobservable window");
}

const ObservationTrace& Observer::trace(double x) const {
  check_probe(x);
  auto key = time_key(x);
  auto it = trace_cache_.find(key);
  if (it == trace_cache_.end()) {
    auto fs = std::make_shared<FrontSet>(scn_);
    fs->add_probe(x);
    fs->advance(T_);
    it = trace_cache_.emplace(key, std::move(fs)).first;
  }
  return it->second->trace(x);
}

double Observer::measure_speed(double t_arr, double probe, double u_left,
                               double u_right, bool moving_left) const {
  // Difference two post-arrival snapshots on the observable side, matching
  // the front by its adjacent states. Starts with a coarse spacing and
  // shrinks until the wave is seen in free flight in both snapshots.
  double eps = std::min(0.05 * std::max(T_ - t_arr, 0.0), 1e-2 * std::max(1.0, T_));
  for (int attempt = 0; attempt < 24; ++attempt, eps *= 0.5) {
    if (eps <= 1e-12) break;
    double t1 = t_arr + eps, t2 = t_arr + 2.0 * eps;
    if (t2 > T_) continue;
    auto locate = [&](double t) -> std::optional<double> {
      const Profile& p = raw_snapshot(t);
      double best = 1e300;
      std::optional<double> pos;
      for (std::size_t i = 0; i < p.xs.size(); ++i) {
        double x = p.xs[i];
        if (mask_ && x > mask_->first + tol::position && x < mask_->second - tol::position)
          continue;
        if (moving_left ? (x > probe + tol::position) : (x < probe - tol::position))
          continue;
        if (std::abs(p.us[i + 1] - u_right) > 1e-7) continue;
        if (std::abs(p.us[i] - u_left) > 1e-7) continue;
        double d = std::abs(x - probe);
        if (d < best) {
          best = d;
          pos = x;
        }
      }
      return pos;
    };
    auto x1 = locate(t1);
    auto x2 = locate(t2);
    if (!x1 || !x2) continue;
    double v1 = (*x1 - probe) / eps;
    double v2 = (*x2 - probe) / (2.0 * eps);
    if (std::abs(v1 - v2) < 1e-9 * std::max(1.0, std::abs(v1))) return v2;
  }
  return 0.0;
}

std::optional<WaveArrival> Observer::first_arrival(
    double x, const std::function<bool(double)>& pred, double t0) const {
  const ObservationTrace& tr = trace(x);
  for (const auto& e : tr.entries) {
    if (e.t <= t0 || e.t > T_) continue;
    if (!pred(e.left) && !pred(e.right)) continue;
    WaveArrival wa;
    wa.probe = x;
    wa.time = e.t;
    wa.u_left = e.inst_left;
    wa.u_right = e.inst_right;
    // A wave crossing toward x < probe leaves its right state behind.
    bool moving_left = std::abs(e.left - e.inst_right) <= 1e-12 &&
                       std::abs(e.right - e.inst_right) <= 1e-12;
    wa.speed = measure_speed(e.t, x, e.inst_left, e.inst_right, moving_left);
    wa.kind = (std::abs(e.inst_right - e.inst_left) > 1.5 * scn_.delta)
                  ? WaveArrival::Kind::Shock
                  : WaveArrival::Kind::RarefactionEdge;
    return wa;
  }
  return std::nullopt;
}

std::vector<double> Observer::stationary_jumps(double t1, double t2, double j_lo,
                                               double j_hi) const {
  if (!(0.0 < t1) || !(t1 < t2))
    throw std::invalid_argument("stationary_jumps: need 0 < t1 < t2");
  const Profile& p1 = raw_snapshot(t1);
  const Profile& p2 = raw_snapshot(t2);
  std::vector<double> out;
  for (std::size_t i = 0; i < p1.xs.size(); ++i) {
    double x = p1.xs[i];
    if (x < j_lo || x > j_hi) continue;
    if (mask_ && x > mask_->first && x < mask_->second) continue;
    double l1 = p1.us[i], r1 = p1.us[i + 1];
    if (std::abs(l1 - r1) <= tol::state_eq) continue;
    auto it = std::lower_bound(p2.xs.begin(), p2.xs.end(), x - 1e-10);
    bool matched = false;
    while (it != p2.xs.end() && *it <= x + 1e-10) {
      std::size_t j = static_cast<std::size_t>(it - p2.xs.begin());
      if (std::abs(p2.us[j] - l1) <= tol::state_eq &&
          std::abs(p2.us[j + 1] - r1) <= tol::state_eq) {
        matched = true;
        break;
      }
      ++it;
    }
    if (matched) out.push_back(x);
  }
  return out;
}

double Observer::pre_interaction_time() const {
  if (partial())
    throw AccessViolation("pre_interaction_time requires full observability");
  FrontSet fs(scn_);
  double t_first = fs.next_event_time();
  if (!std::isfinite(t_first)) return T_;
  return std::min(T_, 0.5 * t_first);
}

}  // namespace ft
