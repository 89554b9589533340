// Command-line front end: scenario simulation, the four reconstruction
// procedures, indistinguishable-family generation and re-simulation checks.
//
// Exit codes: 0 success, 2 configuration error, 3 horizon too short,
// 4 congestion detected, 5 inconsistent observation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "ft/csv.hpp"
#include "ft/flux_curve.hpp"
#include "ft/front_tracking.hpp"
#include "ft/illposed.hpp"
#include "ft/observe.hpp"
#include "ft/recon_flux.hpp"
#include "ft/recon_k.hpp"
#include "ft/recon_obstruction.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitHorizon = 3;
constexpr int kExitCongestion = 4;
constexpr int kExitInconsistent = 5;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: parse failure: ") + e.what());
  }
  return j;
}

double need_number(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigError("config: missing numeric field '" + key + "'");
  return j[key].get<double>();
}

ft::FluxCurve parse_flux(const json& j) {
  if (!j.contains("flux")) throw ConfigError("config: missing 'flux' table");
  const json& f = j["flux"];
  std::string kind = f.value("kind", "");
  if (kind == "lwr") return ft::FluxCurve::lwr();
  if (kind == "quadratic")
    return ft::FluxCurve::concave_quadratic(need_number(f, "scale"),
                                            need_number(f, "root"));
  if (kind == "pwlinear") {
    if (!f.contains("nodes")) throw ConfigError("config: flux.nodes missing");
    std::vector<std::pair<double, double>> nodes;
    for (const auto& n : f["nodes"]) nodes.emplace_back(n.at(0), n.at(1));
    return ft::FluxCurve::piecewise_linear(nodes);
  }
  if (kind == "table") {
    std::string path = f.value("path", "");
    if (path.empty()) throw ConfigError("config: flux.path missing");
    auto nodes = ft::read_flux_table_csv(path);
    std::vector<double> u, v;
    for (auto& n : nodes) {
      u.push_back(n.first);
      v.push_back(n.second);
    }
    return ft::FluxCurve::from_samples(u, v);
  }
  throw ConfigError("config: flux.kind must be lwr|quadratic|pwlinear|table");
}

ft::SpatialCoeff parse_coeff(const json& j) {
  if (!j.contains("coefficient")) throw ConfigError("config: missing 'coefficient'");
  const json& c = j["coefficient"];
  std::vector<double> breaks = c.value("breakpoints", std::vector<double>{});
  if (!c.contains("values")) throw ConfigError("config: coefficient.values missing");
  std::vector<double> values = c["values"].get<std::vector<double>>();
  try {
    return ft::SpatialCoeff(breaks, values);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: coefficient: ") + e.what());
  }
}

ft::Profile parse_profile(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("config: missing '" + key + "'");
  const json& p = j[key];
  ft::Profile out;
  out.xs = p.value("breakpoints", std::vector<double>{});
  if (!p.contains("values")) throw ConfigError("config: " + key + ".values missing");
  out.us = p["values"].get<std::vector<double>>();
  try {
    out.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + key + ": " + e.what());
  }
  return out;
}

ft::Scenario parse_scenario(const json& j) {
  ft::Scenario s{parse_flux(j), parse_coeff(j), parse_profile(j, "initial"),
                 j.value("delta", 1e-3), need_number(j, "T")};
  try {
    s.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: scenario: ") + e.what());
  }
  return s;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir);
}

int run_simulate(const json& cfg, const std::string& out_dir) {
  ft::Scenario s = parse_scenario(cfg);
  std::vector<double> snap_times =
      cfg.value("snapshot_times", std::vector<double>{s.horizon});
  std::vector<double> probes = cfg.value("probes", std::vector<double>{});
  ft::FrontSet fs_run(s);
  for (double p : probes) fs_run.add_probe(p);
  std::sort(snap_times.begin(), snap_times.end());
  for (double t : snap_times) {
    fs_run.advance(t);
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_t%.6f.csv", t);
    ft::write_snapshot_csv(out_dir + "/" + name, fs_run.profile());
  }
  fs_run.advance(s.horizon);
  double dt = cfg.value("trace_dt", s.horizon / 1e4);
  for (double p : probes) {
    char name[64];
    std::snprintf(name, sizeof(name), "trace_x%.6f.csv", p);
    ft::write_trace_csv(out_dir + "/" + name, fs_run.trace(p), s.horizon, dt);
  }
  if (cfg.contains("window")) {
    // Sidecar metadata: which stretch of the exported data is unobservable.
    std::ofstream meta(out_dir + "/observation_meta.txt");
    meta << "mask_a=" << ft::format_full(need_number(cfg["window"], "a")) << "\n";
    meta << "mask_b=" << ft::format_full(need_number(cfg["window"], "b")) << "\n";
  }
  std::printf("simulate: %lld events, %zu snapshots, %zu traces\n",
              fs_run.event_count(), snap_times.size(), probes.size());
  return kExitOk;
}

int run_reconstruct_f(const json& cfg, const std::string& out_dir) {
  ft::Scenario s = parse_scenario(cfg);
  const json& p = cfg.value("probe", json::object());
  ft::ReconGrid grid{p.value("u_lo", s.f.lo()), p.value("u_hi", s.f.hi()),
                     p.value("nu", 4), p.value("anchor_c", 0.0),
                     need_number(cfg, "T")};
  if (!s.k.breakpoints().empty())
    throw ConfigError("flux reconstruction requires a constant coefficient");
  ft::RiemannOracle oracle = [&](double ua, double ub, double T) {
    ft::Scenario rs{s.f, s.k, ft::Profile::riemann(ua, ub), s.delta, T};
    return ft::snapshot_from_profile(ft::evolve_profile(rs, T));
  };
  auto rec = ft::reconstruct_flux(grid, oracle);
  ft::write_flux_table_csv(out_dir + "/flux_nodes.csv", rec.flux.nodes());
  std::ofstream rep(out_dir + "/report.txt");
  rep << "flux reconstruction on [" << ft::format_full(grid.u_lo) << ", "
      << ft::format_full(grid.u_hi) << "], nu=" << grid.nu
      << ", delta=" << ft::format_full(grid.delta()) << "\n";
  for (const auto& n : rec.nodes) {
    const char* kind = n.kind == ft::StepKind::Shock
                           ? "shock"
                           : (n.kind == ft::StepKind::Rarefaction ? "rarefaction"
                                                                  : "general");
    rep << "u=" << ft::format_full(n.u) << " f=" << ft::format_full(n.f) << " ["
        << kind << "]\n";
  }
  for (const auto& iv : rec.interior_nodes)
    rep << "interior u=" << ft::format_full(iv.first)
        << " f=" << ft::format_full(iv.second) << "\n";
  rep << "lip_fprime_estimate=" << ft::format_full(rec.lip_fprime_estimate)
      << " derivative_bound="
      << ft::format_full(rec.derivative_bound(rec.lip_fprime_estimate)) << "\n";
  for (const auto& g : rec.gaps) rep << "gap: " << g << "\n";
  std::printf("reconstruct-f: %zu nodes, %zu gaps -> %s\n", rec.nodes.size(),
              rec.gaps.size(), (out_dir + "/flux_nodes.csv").c_str());
  return kExitOk;
}

int run_reconstruct_k(const json& cfg, const std::string& out_dir) {
  ft::Scenario s = parse_scenario(cfg);
  const json& w = cfg.value("window", json::object());
  double j_lo = w.value("a", 0.0), j_hi = w.value("b", 1.0);
  const json& p = cfg.value("probe", json::object());
  double u_tilde = p.value("u_tilde", 0.5 * (s.f.lo() + s.f.maximizer()));
  auto factory = [&](const ft::Profile& data) {
    return ft::Observer(ft::Scenario{s.f, s.k, data, s.delta, s.horizon}, s.horizon);
  };
  auto rec = ft::reconstruct_k(s.f, factory, j_lo, j_hi, s.horizon, u_tilde);
  ft::write_coeff_csv(out_dir + "/coefficient.csv", rec.coeff);
  std::ofstream rep(out_dir + "/report.txt");
  rep << "coefficient recovery on [" << ft::format_full(j_lo) << ", "
      << ft::format_full(j_hi) << "], tau'=" << ft::format_full(rec.tau_prime)
      << ", anchor=" << ft::format_full(rec.anchor_value) << "\n";
  for (std::size_t i = 0; i < rec.jump_positions.size(); ++i)
    rep << "jump x=" << ft::format_full(rec.jump_positions[i])
        << " residual=" << ft::format_full(rec.residuals[i]) << "\n";
  std::printf("reconstruct-k: %zu jumps -> %s\n", rec.jump_positions.size(),
              (out_dir + "/coefficient.csv").c_str());
  return kExitOk;
}

void write_obstruction_report(const std::string& path, const ft::ObstructionResult& r) {
  std::ofstream rep(path);
  rep << "status=";
  switch (r.status) {
    case ft::ObstructionStatus::Ok: rep << "ok"; break;
    case ft::ObstructionStatus::HorizonTooShort: rep << "horizon-too-short"; break;
    case ft::ObstructionStatus::CongestionDetected: rep << "congestion-detected"; break;
    case ft::ObstructionStatus::NoObstruction: rep << "no-obstruction"; break;
    case ft::ObstructionStatus::Inconsistent: rep << "inconsistent-observation"; break;
  }
  rep << "\n";
  if (r.ok()) {
    rep << "k1=" << ft::format_full(r.obstruction.k1) << "\n";
    rep << "xi1=" << ft::format_full(r.obstruction.xi1) << "\n";
    rep << "xi2=" << ft::format_full(r.obstruction.xi2) << "\n";
    rep << "unique=" << (r.unique ? "true" : "false") << "\n";
  }
  const auto& m = r.mid;
  rep << "x_tilde=" << ft::format_full(m.x_tilde)
      << " y_tilde=" << ft::format_full(m.y_tilde)
      << " v_bar_a=" << ft::format_full(m.v_bar_a) << "\n";
  rep << "tau_tilde=" << ft::format_full(m.tau_tilde)
      << " tau_o=" << ft::format_full(m.tau_o)
      << " tau_a=" << ft::format_full(m.tau_a)
      << " tau_b=" << ft::format_full(m.tau_b) << "\n";
  rep << "T1=" << ft::format_full(m.T1) << " T2=" << ft::format_full(m.T2) << "\n";
  rep << "v=" << ft::format_full(m.v) << " w=" << ft::format_full(m.w)
      << " w_prime=" << ft::format_full(m.w_prime) << "\n";
  rep << "sigma_a=" << ft::format_full(m.sigma_a)
      << " sigma_b=" << ft::format_full(m.sigma_b) << "\n";
  rep << "omega=" << ft::format_full(m.omega) << " v_o=" << ft::format_full(m.v_o)
      << " v_1=" << ft::format_full(m.v_1) << "\n";
  rep << "verify_holds=" << (m.verify_holds ? "true" : "false")
      << " xi2_direct=" << ft::format_full(m.xi2_direct)
      << " xi2_transit=" << ft::format_full(m.xi2_transit) << "\n";
  if (!r.note.empty()) rep << "note: " << r.note << "\n";
}

int obstruction_exit(const ft::ObstructionResult& r) {
  switch (r.status) {
    case ft::ObstructionStatus::Ok:
    case ft::ObstructionStatus::NoObstruction:
      return kExitOk;
    case ft::ObstructionStatus::HorizonTooShort:
      return kExitHorizon;
    case ft::ObstructionStatus::CongestionDetected:
      return kExitCongestion;
    case ft::ObstructionStatus::Inconsistent:
      return kExitInconsistent;
  }
  return kExitInconsistent;
}

int run_reconstruct_obstruction(const json& cfg, const std::string& out_dir,
                                const std::string& mode) {
  ft::FluxCurve f = parse_flux(cfg);
  const json& w = cfg.value("window", json::object());
  double a = w.value("a", 0.0), b = w.value("b", 1.0);
  double T = need_number(cfg, "T");
  double delta = cfg.value("delta", 1e-3);

  ft::ObstructionResult r;
  if (mode == "constant") {
    double u_bar = need_number(cfg, "u_bar");
    double k_o = cfg.value("k_o", 1.0);
    if (cfg.contains("arrivals")) {
      const json& ar = cfg["arrivals"];
      r = ft::reconstruct_constant_from_arrivals(
          f, k_o, a, b, u_bar, need_number(ar, "T1"), need_number(ar, "v_o"),
          need_number(ar, "sigma_a"), need_number(ar, "T2"),
          need_number(ar, "v_1"), need_number(ar, "sigma_b"));
    } else {
      ft::SpatialCoeff k = parse_coeff(cfg);
      auto factory = [&](double d) {
        return ft::Observer(
            ft::Scenario{f, k, ft::Profile::constant(u_bar), d, T}, T, a, b);
      };
      r = ft::reconstruct_constant_extrapolated(f, k_o, a, b, u_bar, factory, delta);
    }
  } else if (mode == "stationary") {
    ft::SpatialCoeff k = parse_coeff(cfg);
    ft::Profile tail = parse_profile(cfg, "initial");
    ft::StationaryAmbient amb{cfg.value("k_o", 1.0), a, b,
                              tail.value_right(a), tail.value_right(b)};
    double x_tilde = cfg.value("probe", json::object()).value("x_tilde", 0.5);
    auto factory = [&](const ft::Profile& left, double d) {
      ft::Profile init = ft::splice_profiles(left, tail, a);
      return ft::Observer(ft::Scenario{f, k, init, d, T}, T, a, b);
    };
    r = ft::reconstruct_stationary_extrapolated(f, amb, x_tilde, factory, delta);
  } else {
    throw ConfigError("mode must be stationary or constant");
  }
  write_obstruction_report(out_dir + "/obstruction.txt", r);
  if (r.ok())
    std::printf("reconstruct-obstruction: k1=%.17g xi1=%.17g xi2=%.17g unique=%s\n",
                r.obstruction.k1, r.obstruction.xi1, r.obstruction.xi2,
                r.unique ? "true" : "false");
  else
    std::printf("reconstruct-obstruction: %s\n", r.note.c_str());
  return obstruction_exit(r);
}

int run_illposed(const json& cfg, const std::string& out_dir) {
  (void)parse_flux(cfg);
  const json& fam = cfg.value("family", json::object());
  double k_amb = fam.value("k_ambient", 1.0);
  double xi = fam.value("xi", 0.5);
  std::vector<double> chi = fam.value("chi", std::vector<double>{0.8, 0.9});
  std::vector<double> values = fam.value("values", std::vector<double>{0.35, 0.6});
  ft::SpanCoeff base{k_amb, xi, chi, values};

  std::ofstream cert(out_dir + "/certificate.txt");
  cert << "base transit sum = " << ft::format_full(base.transit_sum()) << "\n";
  ft::write_coeff_csv(out_dir + "/family_base.csv", base.coefficient());

  const json& w = cfg.value("window", json::object());
  double b = w.value("b", 3.0);

  if (chi.size() == 2) {
    auto widened = ft::widen_family(base, fam.value("eps", 0.5), b);
    auto shifted = ft::shift_family(base, fam.value("rho", 0.2));
    ft::write_coeff_csv(out_dir + "/family_widened.csv", widened.coefficient());
    ft::write_coeff_csv(out_dir + "/family_shifted.csv", shifted.coefficient());
    cert << "widened transit sum (with swallowed ambient) = "
         << ft::format_full(widened.transit_sum()) << "\n";
    cert << "shifted transit sum = " << ft::format_full(shifted.transit_sum())
         << "\n";
  } else if (chi.size() == 3) {
    auto merged = ft::merge_family(base);
    auto swapped = ft::swap_family(base);
    ft::write_coeff_csv(out_dir + "/family_merged.csv", merged.merged.coefficient());
    ft::write_coeff_csv(out_dir + "/family_single.csv", merged.single.coefficient());
    ft::write_coeff_csv(out_dir + "/family_swapped.csv", swapped.coefficient());
    cert << "merged transit sum = " << ft::format_full(merged.merged.transit_sum())
         << "\n";
    cert << "single transit sum = " << ft::format_full(merged.single.transit_sum())
         << "\n";
    cert << "swapped transit sum = " << ft::format_full(swapped.transit_sum())
         << "\n";
  }
  std::printf("illposed: certificates written to %s\n",
              (out_dir + "/certificate.txt").c_str());
  return kExitOk;
}

int run_normalize(const json& cfg, const std::string& out_dir) {
  // Canonical re-emission: sorted keys, shortest exact numbers. Running the
  // command on its own output reproduces it byte for byte.
  std::ofstream out(out_dir + "/config_normalized.json");
  out << cfg.dump(2) << "\n";
  std::printf("normalize-config -> %s\n", (out_dir + "/config_normalized.json").c_str());
  return kExitOk;
}

int run_verify(const json& cfg, const std::string& out_dir,
               const std::string& coeff_path) {
  ft::Scenario truth = parse_scenario(cfg);
  ft::SpatialCoeff recon = ft::read_coeff_csv(coeff_path);
  const json& w = cfg.value("window", json::object());
  double j_lo = w.value("a", 0.0), j_hi = w.value("b", 1.0);
  ft::Scenario other{truth.f, recon, truth.initial, truth.delta, truth.horizon};
  double acc = 0.0;
  const int slices = 20;
  for (int i = 1; i <= slices; ++i) {
    double t = truth.horizon * i / slices;
    acc += ft::profile_l1_distance(ft::evolve_profile(truth, t),
                                   ft::evolve_profile(other, t), j_lo, j_hi) *
           (truth.horizon / slices);
  }
  std::ofstream rep(out_dir + "/verify.txt");
  rep << "l1_spacetime_diff=" << ft::format_full(acc) << "\n";
  std::printf("verify: L1 space-time diff on [%g,%g] = %.17g\n", j_lo, j_hi, acc);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"front-tracking solver and coefficient reconstruction"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", mode = "stationary", coeff_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON configuration")->required();
    sub->add_option("-o,--out", out_dir, "output directory");
  };

  auto* sim = app.add_subcommand("simulate", "evolve a scenario, write CSVs");
  add_common(sim);
  auto* rf = app.add_subcommand("reconstruct-f", "piecewise-affine flux recovery");
  add_common(rf);
  auto* rk = app.add_subcommand("reconstruct-k", "coefficient recovery on a window");
  add_common(rk);
  auto* ro = app.add_subcommand("reconstruct-obstruction",
                                "hidden-obstruction recovery");
  add_common(ro);
  ro->add_option("--mode", mode, "stationary|constant");
  auto* ip = app.add_subcommand("illposed", "indistinguishable-family certificates");
  add_common(ip);
  auto* vf = app.add_subcommand("verify", "re-simulate a reconstruction and diff");
  add_common(vf);
  vf->add_option("--coeff", coeff_path, "reconstructed coefficient CSV")->required();
  auto* nc = app.add_subcommand("normalize-config", "canonical config re-emission");
  add_common(nc);

  CLI11_PARSE(app, argc, argv);

  try {
    json cfg = load_config(config_path);
    ensure_dir(out_dir);
    if (sim->parsed()) return run_simulate(cfg, out_dir);
    if (rf->parsed()) return run_reconstruct_f(cfg, out_dir);
    if (rk->parsed()) return run_reconstruct_k(cfg, out_dir);
    if (ro->parsed()) return run_reconstruct_obstruction(cfg, out_dir, mode);
    if (ip->parsed()) return run_illposed(cfg, out_dir);
    if (vf->parsed()) return run_verify(cfg, out_dir, coeff_path);
    if (nc->parsed()) return run_normalize(cfg, out_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInconsistent;
  }
  return kExitConfig;
}
