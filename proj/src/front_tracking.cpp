#include "ft/front_tracking.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ft/constants.hpp"

namespace ft {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double group_tol(double x) { return tol::position * (1.0 + std::abs(x)); }
}  // namespace

// ---------------------------------------------------------------------------
// Profile

double Profile::value_left(double x) const {
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  return us[static_cast<std::size_t>(it - xs.begin())];
}

double Profile::value_right(double x) const {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  return us[static_cast<std::size_t>(it - xs.begin())];
}

void Profile::validate() const {
  if (us.size() != xs.size() + 1)
    throw std::invalid_argument("Profile: need one value per cell");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw std::invalid_argument("Profile: breakpoints must increase strictly");
}

double profile_l1_distance(const Profile& p, const Profile& q, double lo,
                           double hi) {
  std::vector<double> cuts{lo, hi};
  for (double x : p.xs)
    if (x > lo && x < hi) cuts.push_back(x);
  for (double x : q.xs)
    if (x > lo && x < hi) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double m = 0.5 * (cuts[i] + cuts[i + 1]);
    acc += std::abs(p.value_left(m) - q.value_left(m)) * (cuts[i + 1] - cuts[i]);
  }
  return acc;
}

double profile_mass(const Profile& p, double u_ref, double lo, double hi) {
  std::vector<double> cuts{lo, hi};
  for (double x : p.xs)
    if (x > lo && x < hi) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double m = 0.5 * (cuts[i] + cuts[i + 1]);
    acc += (p.value_left(m) - u_ref) * (cuts[i + 1] - cuts[i]);
  }
  return acc;
}

Profile splice_profiles(const Profile& left, const Profile& right, double x_cut) {
  Profile out;
  out.us.push_back(left.us.front());
  for (std::size_t i = 0; i < left.xs.size() && left.xs[i] < x_cut; ++i) {
    out.xs.push_back(left.xs[i]);
    out.us.push_back(left.us[i + 1]);
  }
  double rv = right.value_right(x_cut);
  if (rv != out.us.back()) {
    out.xs.push_back(x_cut);
    out.us.push_back(rv);
  }
  for (std::size_t i = 0; i < right.xs.size(); ++i) {
    if (right.xs[i] <= x_cut) continue;
    out.xs.push_back(right.xs[i]);
    out.us.push_back(right.us[i + 1]);
  }
  out.validate();
  return out;
}

void Scenario::validate() const {
  initial.validate();
  if (!(delta > 0.0)) throw std::invalid_argument("Scenario: delta must be positive");
  if (horizon < 0.0) throw std::invalid_argument("Scenario: horizon must be >= 0");
  for (double u : initial.us) f.check_domain(u);
}

// ---------------------------------------------------------------------------
// ObservationTrace

double ObservationTrace::left(double t) const {
  if (entries.empty()) throw std::logic_error("trace has no entries");
  auto it = std::upper_bound(entries.begin(), entries.end(), t,
                             [](double s, const Entry& e) { return s < e.t; });
  if (it == entries.begin()) return entries.front().left;
  return std::prev(it)->left;
}

double ObservationTrace::right(double t) const {
  if (entries.empty()) throw std::logic_error("trace has no entries");
  auto it = std::upper_bound(entries.begin(), entries.end(), t,
                             [](double s, const Entry& e) { return s < e.t; });
  if (it == entries.begin()) return entries.front().right;
  return std::prev(it)->right;
}

std::optional<std::size_t> ObservationTrace::first_entry_after(
    double t_after, const std::function<bool(double, double)>& pred) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].t <= t_after) continue;
    if (pred(entries[i].left, entries[i].right)) return i;
  }
  return std::nullopt;
}

double trace_l1_distance(const ObservationTrace& a, const ObservationTrace& b,
                         double T) {
  std::vector<double> cuts{0.0, T};
  for (const auto& e : a.entries)
    if (e.t > 0.0 && e.t < T) cuts.push_back(e.t);
  for (const auto& e : b.entries)
    if (e.t > 0.0 && e.t < T) cuts.push_back(e.t);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double m = 0.5 * (cuts[i] + cuts[i + 1]);
    acc += std::abs(a.left(m) - b.left(m)) * (cuts[i + 1] - cuts[i]);
  }
  return acc;
}

double trace_sup_distance(const ObservationTrace& a, const ObservationTrace& b,
                          double T) {
  std::vector<double> cuts{0.0, T};
  for (const auto& e : a.entries)
    if (e.t > 0.0 && e.t < T) cuts.push_back(e.t);
  for (const auto& e : b.entries)
    if (e.t > 0.0 && e.t < T) cuts.push_back(e.t);
  std::sort(cuts.begin(), cuts.end());
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    m = std::max(m, std::abs(a.left(mid) - b.left(mid)));
  }
  return m;
}

// ---------------------------------------------------------------------------
// FrontSet

FrontSet::FrontSet(Scenario s) : scn_(std::move(s)) {
  scn_.validate();
  initialize();
}

int FrontSet::new_node(const Node& n) {
  nodes_.push_back(n);
  nodes_.back().alive = true;
  return static_cast<int>(nodes_.size()) - 1;
}

void FrontSet::kill(int id) {
  nodes_[id].alive = false;
  nodes_[id].version++;
}

double FrontSet::far_left_u() const {
  if (head_ < 0) return scn_.initial.us.front();
  return nodes_[head_].ul;
}

std::optional<double> FrontSet::collision_time(int a, int b, double now) const {
  const Node& A = nodes_[a];
  const Node& B = nodes_[b];
  double rel = A.speed - B.speed;
  double scale = std::max({1.0, std::abs(A.speed), std::abs(B.speed)});
  if (rel <= tol::parallel * scale) return std::nullopt;
  double gap = B.pos(now) - A.pos(now);
  if (gap <= group_tol(A.pos(now))) return now;
  return now + gap / rel;
}

void FrontSet::schedule(int a, int b) {
  if (a < 0 || b < 0) return;
  auto t = collision_time(a, b, time_);
  if (!t) return;
  heap_.push_back(Event{*t, a, b, nodes_[a].version, nodes_[b].version});
  std::push_heap(heap_.begin(), heap_.end());
}

void FrontSet::emit_rarefaction_steps(double ul, double ur, double k, double x,
                                      double t, std::vector<Node>& out) const {
  double width = std::abs(ur - ul);
  if (width < tol::zero_wave) return;
  int n = std::max(1, static_cast<int>(std::ceil(width / scn_.delta - 1e-9)));
  double prev = ul;
  for (int i = 1; i <= n; ++i) {
    double next = ul + (ur - ul) * (double(i) / n);
    Node nd;
    nd.x_ref = x;
    nd.t_ref = t;
    nd.ul = prev;
    nd.ur = next;
    nd.kl = nd.kr = k;
    nd.kind = 1;
    nd.speed = k * (scn_.f.value(next) - scn_.f.value(prev)) / (next - prev);
    out.push_back(nd);
    prev = next;
  }
}

void FrontSet::insert_fan_nodes(const WaveFan& fan, double x, double t,
                                int after, std::vector<int>* created) {
  std::vector<Node> raw;
  double k_here = fan.k_left;
  for (const auto& w : fan.waves) {
    if (auto* s = std::get_if<Shock>(&w)) {
      if (std::abs(s->u_right - s->u_left) < tol::zero_wave) continue;
      Node nd;
      nd.x_ref = x;
      nd.t_ref = t;
      nd.ul = s->u_left;
      nd.ur = s->u_right;
      nd.kl = nd.kr = k_here;
      nd.kind = 0;
      nd.speed = s->speed;
      raw.push_back(nd);
    } else if (auto* r = std::get_if<Rarefaction>(&w)) {
      emit_rarefaction_steps(r->u_left, r->u_right, r->k, x, t, raw);
    } else {
      const auto& kw = std::get<KWave>(w);
      Node nd;
      nd.x_ref = x;
      nd.t_ref = t;
      nd.ul = kw.u_left;
      nd.ur = kw.u_right;
      nd.kl = kw.k_left;
      nd.kr = kw.k_right;
      nd.kind = 2;
      nd.speed = 0.0;
      raw.push_back(nd);
      k_here = kw.k_right;
    }
  }
  int prev = after;
  for (const auto& nd : raw) {
    int id = new_node(nd);
    Node& n = nodes_[id];
    if (prev < 0) {
      n.next = head_;
      if (head_ >= 0) nodes_[head_].prev = id;
      head_ = id;
    } else {
      n.next = nodes_[prev].next;
      n.prev = prev;
      nodes_[prev].next = id;
      if (n.next >= 0) nodes_[n.next].prev = id;
    }
    if (created) created->push_back(id);
    prev = id;
  }
}

void FrontSet::initialize() {
  // Union of initial-data breakpoints and coefficient breakpoints.
  std::vector<double> cuts = scn_.initial.xs;
  for (double b : scn_.k.breakpoints()) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < tol::position; }),
             cuts.end());

  int last = -1;
  for (double x : cuts) {
    double ul = scn_.initial.value_left(x);
    double ur = scn_.initial.value_right(x);
    double kl = scn_.k.value_left(x);
    double kr = scn_.k.value_right(x);
    WaveFan fan = (std::abs(kl - kr) < tol::zero_wave)
                      ? solve_homogeneous(scn_.f, kl, ul, ur)
                      : solve_two_k(scn_.f, kl, ul, kr, ur);
    std::vector<int> created;
    insert_fan_nodes(fan, x, 0.0, last, &created);
    if (!created.empty()) last = created.back();
  }
  // Initial event schedule.
  for (int i = head_; i >= 0; i = nodes_[i].next)
    if (nodes_[i].next >= 0) schedule(i, nodes_[i].next);
}

void FrontSet::add_probe(double x) {
  if (started_) throw std::logic_error("probes must be registered before advancing");
  Probe p;
  p.x = x;
  p.t_done = 0.0;
  p.trace.x = x;
  probes_.push_back(std::move(p));
  reset_cursor(probes_.back(), 0.0);
  // Initial entry.
  Probe& pb = probes_.back();
  double l, r;
  probe_steady(pb, 0.0, l, r);
  pb.trace.entries.push_back({0.0, scn_.initial.value_left(x),
                              scn_.initial.value_right(x), l, r});
}

void FrontSet::reset_cursor(Probe& p, double t) {
  // Last node with pos < x, or pos == x and speed <= 0 (the t+ ordering).
  p.cursor = -1;
  for (int i = head_; i >= 0; i = nodes_[i].next) {
    double px = nodes_[i].pos(t);
    if (px < p.x - group_tol(p.x) ||
        (std::abs(px - p.x) <= group_tol(p.x) && nodes_[i].speed <= 0.0))
      p.cursor = i;
    else
      break;
  }
}

void FrontSet::probe_steady(const Probe& p, double t, double& l, double& r) const {
  // States just left/right of the probe, honoring fronts sitting exactly on it.
  double state = far_left_u();
  l = r = state;
  bool found_at = false;
  for (int i = head_; i >= 0; i = nodes_[i].next) {
    double px = nodes_[i].pos(t);
    if (px < p.x - group_tol(p.x)) {
      l = r = nodes_[i].ur;
    } else if (std::abs(px - p.x) <= group_tol(p.x)) {
      if (!found_at) l = nodes_[i].ul;
      found_at = true;
      r = nodes_[i].ur;
    } else {
      break;
    }
  }
}

void FrontSet::probe_record_event(Probe& p, double t, double) {
  double l, r;
  probe_steady(p, t, l, r);
  double il = l, ir = r;
  auto& es = p.trace.entries;
  if (!es.empty() && std::abs(es.back().t - t) <= tol::position) {
    es.back().inst_left = std::min(es.back().inst_left, il);
    es.back().inst_right = std::max(es.back().inst_right, ir);
    es.back().left = l;
    es.back().right = r;
  } else if (es.empty() || es.back().left != l || es.back().right != r) {
    es.push_back({t, il, ir, l, r});
  }
}

void FrontSet::probes_to(double t_end) {
  for (auto& p : probes_) {
    if (p.cursor == -2) reset_cursor(p, p.t_done);
    if (p.cursor >= 0 && !nodes_[p.cursor].alive) reset_cursor(p, p.t_done);
    while (true) {
      int L = p.cursor;
      int R = (L == -1) ? head_ : nodes_[L].next;
      double tL = kInf, tR = kInf;
      if (L >= 0 && nodes_[L].speed > 0.0) {
        double tc = nodes_[L].t_ref + (p.x - nodes_[L].x_ref) / nodes_[L].speed;
        if (tc > p.t_done + 0.0 && tc <= t_end) tL = tc;
      }
      if (R >= 0 && nodes_[R].speed < 0.0) {
        double tc = nodes_[R].t_ref + (p.x - nodes_[R].x_ref) / nodes_[R].speed;
        if (tc > p.t_done + 0.0 && tc <= t_end) tR = tc;
      }
      if (tL == kInf && tR == kInf) break;
      if (tL <= tR) {
        const Node& n = nodes_[L];
        p.trace.entries.push_back({tL, n.ul, n.ur, n.ul, n.ul});
        p.cursor = n.prev;
        p.t_done = tL;
      } else {
        const Node& n = nodes_[R];
        p.trace.entries.push_back({tR, n.ul, n.ur, n.ur, n.ur});
        p.cursor = R;
        p.t_done = tR;
      }
    }
    p.t_done = t_end;
  }
}

double FrontSet::next_event_time() const {
  auto h = heap_;
  std::make_heap(h.begin(), h.end());
  while (!h.empty()) {
    const Event ev = h.front();
    std::pop_heap(h.begin(), h.end());
    h.pop_back();
    if (!nodes_[ev.a].alive || !nodes_[ev.b].alive) continue;
    if (nodes_[ev.a].version != ev.va || nodes_[ev.b].version != ev.vb) continue;
    if (nodes_[ev.a].next != ev.b) continue;
    return ev.t;
  }
  return kInf;
}

void FrontSet::process_event(const Event& ev) {
  const double t = std::max(ev.t, time_);
  // Gather the full group of fronts meeting at one point.
  double x = nodes_[ev.a].pos(t);
  // Snap to a k-front position when one participates.
  int left_most = ev.a;
  while (nodes_[left_most].prev >= 0) {
    int q = nodes_[left_most].prev;
    if (std::abs(nodes_[q].pos(t) - x) <= group_tol(x))
      left_most = q;
    else
      break;
  }
  int right_most = ev.b;
  while (nodes_[right_most].next >= 0) {
    int q = nodes_[right_most].next;
    if (std::abs(nodes_[q].pos(t) - x) <= group_tol(x))
      right_most = q;
    else
      break;
  }
  for (int i = left_most;; i = nodes_[i].next) {
    if (nodes_[i].kind == 2) {
      x = nodes_[i].x_ref;  // exact breakpoint position, never drifts
      break;
    }
    if (i == right_most) break;
  }

  // Record probe activity up to the event time with the old geometry.
  probes_to(t);

  double ul = nodes_[left_most].ul;
  double kl = nodes_[left_most].kl;
  double ur = nodes_[right_most].ur;
  double kr = nodes_[right_most].kr;
  int before = nodes_[left_most].prev;
  int after = nodes_[right_most].next;

  for (int i = left_most;; i = nodes_[i].next) {
    kill(i);
    if (i == right_most) break;
  }
  if (before >= 0)
    nodes_[before].next = after;
  else
    head_ = after;
  if (after >= 0) nodes_[after].prev = before;

  WaveFan fan = (std::abs(kl - kr) < tol::zero_wave)
                    ? solve_homogeneous(scn_.f, kl, ul, ur)
                    : solve_two_k(scn_.f, kl, ul, kr, ur);
  std::vector<int> created;
  insert_fan_nodes(fan, x, t, before, &created);

  time_ = t;
  if (created.empty()) {
    schedule(before, after);
  } else {
    schedule(before, created.front());
    schedule(created.back(), after);
  }

  // Probes lying exactly on the event point see an instantaneous change.
  for (auto& p : probes_) {
    if (std::abs(p.x - x) <= group_tol(x)) {
      reset_cursor(p, t);
      probe_record_event(p, t, x);
      p.t_done = t;
    } else if (p.cursor >= 0 && !nodes_[p.cursor].alive) {
      reset_cursor(p, t);
    }
  }

  if (++events_ > max_events) {
    std::ostringstream os;
    os << "front tracking aborted: more than " << max_events
       << " events (t=" << time_ << ", fronts=" << fronts().size() << ")";
    throw std::runtime_error(os.str());
  }
}

void FrontSet::advance(double t_target) {
  if (t_target < time_) throw std::invalid_argument("advance: target before current time");
  started_ = true;
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end());
    Event ev = heap_.back();
    heap_.pop_back();
    if (ev.t > t_target) {  // not yet due; put it back
      heap_.push_back(ev);
      std::push_heap(heap_.begin(), heap_.end());
      break;
    }
    if (!nodes_[ev.a].alive || !nodes_[ev.b].alive) continue;
    if (nodes_[ev.a].version != ev.va || nodes_[ev.b].version != ev.vb) continue;
    if (nodes_[ev.a].next != ev.b) continue;
    process_event(ev);
  }
  probes_to(t_target);
  time_ = t_target;
}

Profile FrontSet::profile() const {
  Profile p;
  p.us.push_back(far_left_u());
  for (int i = head_; i >= 0; i = nodes_[i].next) {
    double x = nodes_[i].pos(time_);
    if (!p.xs.empty() && x <= p.xs.back() + group_tol(x)) {
      p.us.back() = nodes_[i].ur;
    } else {
      p.xs.push_back(x);
      p.us.push_back(nodes_[i].ur);
    }
  }
  // Collapse no-jump breakpoints.
  Profile q;
  q.us.push_back(p.us.front());
  for (std::size_t i = 0; i < p.xs.size(); ++i) {
    if (p.us[i + 1] == q.us.back()) continue;
    q.xs.push_back(p.xs[i]);
    q.us.push_back(p.us[i + 1]);
  }
  return q;
}

const ObservationTrace& FrontSet::trace(double x) const {
  for (const auto& p : probes_)
    if (std::abs(p.x - x) <= group_tol(x)) return p.trace;
  throw std::logic_error("no probe registered at requested position");
}

std::vector<FrontSet::FrontView> FrontSet::fronts() const {
  std::vector<FrontView> out;
  for (int i = head_; i >= 0; i = nodes_[i].next) {
    const Node& n = nodes_[i];
    out.push_back({n.pos(time_), n.speed, n.ul, n.ur, n.kl, n.kr, n.kind});
  }
  return out;
}

Profile evolve_profile(const Scenario& s, double t) {
  FrontSet fs(s);
  fs.advance(t);
  return fs.profile();
}

}  // namespace ft
