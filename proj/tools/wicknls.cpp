#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "wicknls/harness.hpp"
#include "wicknls/io.hpp"

// Subcommand front end.  Exit codes: 0 success / criterion passed,
// 1 criterion failed, 2 usage or configuration error, 3 numerical abort or
// internal error.

namespace {

using namespace wicknls;

std::string g6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Field make_datum(Spectral& sp, const RunConfig& cfg) {
  if (cfg.datum == "smooth") return smooth_datum(sp, cfg.datum_kappa, cfg.datum_seed);
  return default_datum(sp);
}

bool decreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return !v.empty();
}

// Resume-by-hash: identical tool + config with intact outputs and a
// non-failing recorded status is not recomputed.
bool try_skip(const RunConfig& cfg, const std::string& tool, int& code) {
  if (cfg.out_dir.empty()) return false;
  std::string status;
  if (!outputs_current(cfg.out_dir, tool, dump_config(cfg), &status)) return false;
  if (status != "pass" && status != "done") return false;
  std::cout << tool << ": outputs in " << cfg.out_dir << " are current (status " << status
            << "); skipping\n";
  code = 0;
  return true;
}

void finish(const RunConfig& cfg, RunManifest& man) {
  if (cfg.out_dir.empty()) return;
  man.config_echo = dump_config(cfg);
  write_manifest(cfg.out_dir, man);
}

int cmd_sample_noise(const RunConfig& cfg) {
  int code;
  if (try_skip(cfg, "sample-noise", code)) return code;
  Spectral sp(cfg.sim.grid);
  NoiseBundle b = build_bundle(sp, cfg.sim.seed, cfg.sim.stream, cfg.sim.eps,
                               cfg.sim.amplitude, cfg.sim.allow_coarse);
  double sup_w = 0.0, sup_y = 0.0;
  for (size_t i = 0; i < b.wick.v.size(); ++i) {
    sup_w = std::max(sup_w, std::abs(b.wick.v[i].real()));
    sup_y = std::max(sup_y, std::abs(b.Y_eps.v[i].real()));
  }
  std::ostringstream sum;
  sum << "wicknls noise sample\n";
  sum << "eps " << fmt_full(b.eps) << "\nc_eps " << fmt_full(b.c_eps) << '\n';
  sum << "sup|Y_eps| " << fmt_full(sup_y) << "\nsup|wick| " << fmt_full(sup_w) << '\n';
  sum << "xi_hash " << hash_field(b.xi) << '\n';
  std::cout << "sample-noise: eps = " << g6(b.eps) << ", c_eps = " << g6(b.c_eps)
            << ", sup|Y_eps| = " << g6(sup_y) << "\n";
  if (!cfg.out_dir.empty()) {
    RunManifest man;
    man.tool = "sample-noise";
    man.status = "done";
    emit_file(cfg.out_dir, "xi.fld", encode_snapshot(b.xi), man);
    emit_file(cfg.out_dir, "xi_eps.fld", encode_snapshot(b.xi_eps), man);
    emit_file(cfg.out_dir, "Y_eps.fld", encode_snapshot(b.Y_eps), man);
    emit_file(cfg.out_dir, "wick.fld", encode_snapshot(b.wick), man);
    emit_file(cfg.out_dir, "v_tilde.fld", encode_snapshot(b.v_tilde), man);
    emit_file(cfg.out_dir, "summary.txt", sum.str(), man);
    finish(cfg, man);
  }
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  int code;
  if (try_skip(cfg, "simulate", code)) return code;
  Spectral sp(cfg.sim.grid);
  Field v0 = make_datum(sp, cfg);
  Trajectory traj = evolve(sp, cfg.sim, v0, true);
  if (traj.phase_resolution >= 1.0)
    std::cerr << "simulate: warning: dt under-resolves the phase rotation "
                 "(dt (max|V_pr| + lambda max|w0|^p) = "
              << g6(traj.phase_resolution) << " >= 1)\n";
  double m0 = traj.ledger.rows.front().mass, drift = 0.0;
  for (const LedgerRow& r : traj.ledger.rows)
    drift = std::max(drift, std::abs(r.mass - m0) / std::abs(m0));
  std::cout << "simulate: T = " << g6(cfg.sim.T) << ", steps = " << traj.steps
            << ", mass drift = " << g6(drift)
            << ", E(T) = " << g6(traj.ledger.rows.back().E) << "\n";
  if (!cfg.out_dir.empty()) {
    RunManifest man;
    man.tool = "simulate";
    man.status = "done";
    man.steps = traj.steps;
    emit_file(cfg.out_dir, "ledger.csv", ledger_csv(traj.ledger), man);
    emit_file(cfg.out_dir, "final.fld", encode_snapshot(traj.snapshots.back()), man);
    finish(cfg, man);
  }
  return 0;
}

int cmd_converge(const RunConfig& cfg) {
  int code;
  if (try_skip(cfg, "converge", code)) return code;
  Spectral sp(cfg.sim.grid);
  Field v0 = make_datum(sp, cfg);
  std::vector<double> ladder = dyadic_ladder(cfg.ladder_kmin, cfg.ladder_kmax);
  ConvergenceReport rep = run_convergence(sp, cfg.sim, ladder, cfg.norm, v0);
  for (size_t j = 0; j + 1 < rep.eps_ladder.size(); ++j)
    std::cout << "  pair " << j << "  eps " << g6(rep.eps_ladder[j]) << " -> "
              << g6(rep.eps_ladder[j + 1]) << "  gap " << g6(rep.gaps_norm[j]) << "  (L2w "
              << g6(rep.gaps_l2w[j]) << ")\n";
  bool pass = rep.monotone;
  std::cout << "converge: " << (pass ? "pass" : "FAIL")
            << " — sup gaps " << (pass ? "strictly decreasing" : "not strictly decreasing")
            << ", fitted rate " << g6(rep.fitted_rate) << " per eps-halving\n";
  if (!cfg.out_dir.empty()) {
    RunManifest man;
    man.tool = "converge";
    man.status = pass ? "pass" : "fail";
    man.steps = rep.steps;
    man.wall_seconds = rep.wall_seconds;
    emit_file(cfg.out_dir, "convergence.csv", convergence_csv(rep), man);
    std::string svg = render_svg(convergence_plot(rep));
    std::string bad = validate_svg(svg);
    if (!bad.empty()) throw std::logic_error("converge: emitted SVG invalid: " + bad);
    emit_file(cfg.out_dir, "convergence.svg", svg, man);
    finish(cfg, man);
  }
  return pass ? 0 : 1;
}

int cmd_energy_audit(const RunConfig& cfg) {
  int code;
  if (try_skip(cfg, "energy-audit", code)) return code;
  Spectral sp(cfg.sim.grid);
  Field v0 = make_datum(sp, cfg);
  AuditReport coarse = energy_audit(cfg.sim, v0);
  SimConfig halved = cfg.sim;
  halved.dt *= 0.5;
  AuditReport fine = energy_audit(halved, v0);
  double ratio = fine.max_residual > 0.0 ? coarse.max_residual / fine.max_residual : 0.0;
  bool pass = coarse.max_residual < 1e-3 && ratio >= 3.0;
  std::cout << "  residual(dt)   " << g6(coarse.max_residual) << "  (mass drift "
            << g6(coarse.mass_drift) << ")\n";
  std::cout << "  residual(dt/2) " << g6(fine.max_residual) << "  ratio " << g6(ratio)
            << "\n";
  std::cout << "energy-audit: " << (pass ? "pass" : "FAIL")
            << " — dE/dt = -lambda H holds to " << g6(coarse.max_residual)
            << " and tightens " << g6(ratio) << "x when dt halves\n";
  if (!cfg.out_dir.empty()) {
    RunManifest man;
    man.tool = "energy-audit";
    man.status = pass ? "pass" : "fail";
    man.steps = uint64_t(std::llround(cfg.sim.T / cfg.sim.dt));
    emit_file(cfg.out_dir, "audit.csv", ledger_csv(coarse.ledger), man);
    emit_file(cfg.out_dir, "audit_half_dt.csv", ledger_csv(fine.ledger), man);
    finish(cfg, man);
  }
  return pass ? 0 : 1;
}

int cmd_stochastic_bounds(const RunConfig& cfg) {
  int code;
  if (try_skip(cfg, "stochastic-bounds", code)) return code;
  std::vector<double> ladder = dyadic_ladder(cfg.ladder_kmin, cfg.ladder_kmax);
  StochasticBoundsParams prm;
  prm.amplitude = cfg.sim.amplitude;
  prm.allow_coarse = cfg.sim.allow_coarse;
  StochasticBoundsReport rep =
      run_stochastic_campaign(cfg.sim.grid, ladder, cfg.mc_M, cfg.sim.seed, prm);
  std::string text = campaign_text(rep);
  std::cout << text;
  bool pass = rep.grad_ratio_spread < 0.5 && rep.wick_gap_decreasing;
  std::cout << "stochastic-bounds: " << (pass ? "pass" : "FAIL") << " — grad ratio spread "
            << g6(rep.grad_ratio_spread) << ", wick gaps "
            << (rep.wick_gap_decreasing ? "strictly decreasing" : "not decreasing") << "\n";
  if (!cfg.out_dir.empty()) {
    RunManifest man;
    man.tool = "stochastic-bounds";
    man.status = pass ? "pass" : "fail";
    emit_file(cfg.out_dir, "campaign.txt", text, man);
    finish(cfg, man);
  }
  return pass ? 0 : 1;
}

int cmd_renorm_demo(const RunConfig& cfg) {
  int code;
  if (try_skip(cfg, "renorm-demo", code)) return code;
  Spectral sp(cfg.sim.grid);
  Field v0 = make_datum(sp, cfg);
  std::vector<double> ladder = dyadic_ladder(cfg.ladder_kmin, cfg.ladder_kmax);
  RenormReport rep = run_renormalization_demo(sp, cfg.sim, ladder, v0);
  for (size_t j = 0; j < rep.corrected_gaps.size(); ++j)
    std::cout << "  corrected pair " << j << "  gap(T) " << g6(rep.corrected_gaps[j])
              << "\n";
  std::cout << "  uncorrected finest gap(T) " << g6(rep.uncorrected_finest_gap)
            << "  (delta_c " << g6(rep.delta_c) << ", phase identity residual "
            << g6(rep.phase_identity_residual) << ")\n";
  bool pass = decreasing(rep.corrected_gaps) && rep.ratio >= 10.0;
  std::cout << "renorm-demo: " << (pass ? "pass" : "FAIL")
            << " — corrected gaps converge while the raw finest pair stalls "
            << g6(rep.ratio) << "x above them\n";
  if (!cfg.out_dir.empty()) {
    RunManifest man;
    man.tool = "renorm-demo";
    man.status = pass ? "pass" : "fail";
    man.steps = rep.steps;
    man.wall_seconds = rep.wall_seconds;
    emit_file(cfg.out_dir, "renorm.txt", renorm_text(rep), man);
    finish(cfg, man);
  }
  return pass ? 0 : 1;
}

struct Common {
  std::string config_path;
  std::vector<std::string> sets;
  double eps = 0, boxL = 0, dt = 0, T = 0, p = 0, lambda = 0;
  int64_t seed = 0;
  int grid_n = 0;
  std::string out_dir;
  CLI::Option *o_eps = nullptr, *o_boxL = nullptr, *o_dt = nullptr, *o_T = nullptr,
              *o_p = nullptr, *o_lambda = nullptr, *o_seed = nullptr, *o_grid_n = nullptr,
              *o_out = nullptr;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "key = value configuration file");
  sub->add_option("--set", c.sets, "inline assignment, e.g. --set 'mc.M = 50'");
  c.o_eps = sub->add_option("--eps", c.eps, "mollification scale");
  c.o_grid_n = sub->add_option("--grid-n", c.grid_n, "grid points per side");
  c.o_boxL = sub->add_option("--box-L", c.boxL, "periodic box side");
  c.o_dt = sub->add_option("--dt", c.dt, "time step");
  c.o_T = sub->add_option("--T", c.T, "final time");
  c.o_p = sub->add_option("--p", c.p, "nonlinearity power");
  c.o_lambda = sub->add_option("--lambda", c.lambda, "defocusing strength");
  c.o_seed = sub->add_option("--seed", c.seed, "noise seed");
  c.o_out = sub->add_option("--out-dir", c.out_dir, "output directory (resumable)");
}

RunConfig build_config(const Common& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) cfg = load_config_file(c.config_path);
  for (const std::string& s : c.sets) apply_config_line(cfg, s);
  if (c.o_eps->count()) cfg.sim.eps = c.eps;
  if (c.o_grid_n->count()) cfg.sim.grid.n = c.grid_n;
  if (c.o_boxL->count()) cfg.sim.grid.L = c.boxL;
  if (c.o_dt->count()) cfg.sim.dt = c.dt;
  if (c.o_T->count()) cfg.sim.T = c.T;
  if (c.o_p->count()) cfg.sim.p = c.p;
  if (c.o_lambda->count()) cfg.sim.lambda = c.lambda;
  if (c.o_seed->count()) cfg.sim.seed = uint64_t(c.seed);
  if (c.o_out->count()) cfg.out_dir = c.out_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the 2D stochastic NLS with Wick-renormalized "
               "multiplicative space white noise"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Sub subs[] = {
      {"sample-noise", "draw one noise realization and its derived fields", cmd_sample_noise},
      {"simulate", "integrate one configuration and record the energy ledger", cmd_simulate},
      {"converge", "coupled eps-ladder convergence of the renormalized flow", cmd_converge},
      {"energy-audit", "check dE/dt = -lambda H along the flow at dt and dt/2",
       cmd_energy_audit},
      {"stochastic-bounds", "Monte Carlo verification of the eps-uniform noise bounds",
       cmd_stochastic_bounds},
      {"renorm-demo", "corrected ladder vs the raw flow without the counterterm",
       cmd_renorm_demo},
  };
  Common commons[6];
  int which = -1;
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(sub, commons[i]);
    sub->callback([&which, i]() { which = i; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    return subs[which].run(build_config(commons[which]));
  } catch (const wicknls::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << " (last good time "
              << e.last_good_time << ")\n";
    return 3;
  } catch (const wicknls::UsageError& e) {  // ConfigError included
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
