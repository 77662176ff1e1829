#include "wicknls/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "wicknls/io.hpp"
#include "wicknls/rng.hpp"
#include "wicknls/sha256.hpp"

namespace wicknls {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Field take_real(Field f) {
  for (cd& z : f.v) z = z.real();
  return f;
}

}  // namespace

Field default_datum(Spectral& sp) {
  const GridSpec& g = sp.grid();
  Field vh(g, Tag::spectral);
  for (int a1 = 0; a1 < g.n; ++a1) {
    double k1 = g.kfreq(a1);
    int m1 = g.mode(a1);
    for (int a2 = 0; a2 < g.n; ++a2) {
      double k2 = g.kfreq(a2);
      int m2 = g.mode(a2);
      double amp = (M_PI / g.L) * std::exp(-0.25 * (k1 * k1 + k2 * k2));
      vh.at(a1, a2) = ((m1 + m2) & 1) ? -amp : amp;
    }
  }
  return take_real(sp.inverse(vh));
}

Field smooth_datum(Spectral& sp, double kappa, uint64_t seed) {
  require(kappa > 0.0, "smooth_datum: kappa must be positive");
  const GridSpec& g = sp.grid();
  CounterRng rng(seed, 0, purpose::datum);
  Field vh(g, Tag::spectral);
  for (int a1 = 0; a1 < g.n; ++a1) {
    double k1 = g.kfreq(a1);
    int m1 = g.mode(a1);
    for (int a2 = 0; a2 < g.n; ++a2) {
      double k2 = g.kfreq(a2);
      int m2 = g.mode(a2);
      auto [x, y] = rng.normal_pair(uint32_t(int32_t(m1)), uint32_t(int32_t(m2)));
      double damp = std::exp(-(k1 * k1 + k2 * k2) / (2.0 * kappa * kappa));
      vh.at(a1, a2) = cd(x, y) * damp;
    }
  }
  Field v = sp.inverse(vh);
  double nrm = l2_norm(v);
  require(nrm > 0.0, "smooth_datum: degenerate draw");
  for (cd& z : v.v) z /= nrm;
  return v;
}

std::vector<double> dyadic_ladder(int kmin, int kmax) {
  require(kmin >= 0 && kmax >= kmin, "ladder: want 0 <= kmin <= kmax");
  std::vector<double> eps;
  for (int k = kmin; k <= kmax; ++k) eps.push_back(std::ldexp(1.0, -k));
  return eps;
}

std::string hash_field(const Field& f) { return Sha256::of_string(encode_snapshot(f)); }

namespace {

void check_ladder(const std::vector<double>& eps) {
  require(eps.size() >= 2, "ladder: at least two eps levels");
  for (size_t i = 0; i < eps.size(); ++i) {
    require(eps[i] > 0.0, "ladder: eps must be positive");
    if (i > 0) require(eps[i] < eps[i - 1], "ladder: eps must decrease strictly");
  }
}

void check_resolution(const SimConfig& base, const std::vector<double>& eps) {
  if (base.allow_coarse) return;
  double floor = 4.0 * base.grid.h();
  if (eps.back() >= floor) return;
  size_t keep = 0;
  while (keep < eps.size() && eps[keep] >= floor) ++keep;
  std::ostringstream os;
  os << "ladder: finest eps = " << fmt_full(eps.back()) << " < 4h = " << fmt_full(floor)
     << " at n = " << base.grid.n << "; ";
  if (keep >= 2)
    os << "resolvable sub-ladder: the first " << keep << " levels (eps >= "
       << fmt_full(eps[keep - 1]) << ")";
  else
    os << "no resolvable sub-ladder at this grid; raise n or set resolution.allow_coarse";
  throw ConfigError(os.str());
}

// a gauge context pinned in memory together with the walker that references
// it (vector<Member> would re-seat the reference on reallocation)
struct Member {
  GaugeContext ctx;
  StrangWalker walker;
  Member(Spectral& sp, NoiseBundle b, const SimConfig& cfg, const Field& v0)
      : ctx(std::move(b), cfg.p), walker(sp, ctx, cfg, v0) {}
};

Field diff_field(const Field& a, const Field& b) {
  Field d(a.grid, Tag::physical);
  for (size_t i = 0; i < d.v.size(); ++i) d.v[i] = a.v[i] - b.v[i];
  return d;
}

double fit_decay_rate(const std::vector<double>& gaps) {
  if (gaps.size() < 2) return 0.0;
  for (double gp : gaps)
    if (!(gp > 0.0)) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t j = 0; j < gaps.size(); ++j) {
    double x = double(j), y = std::log2(gaps[j]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  double nn = double(gaps.size());
  double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  return -slope;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return !v.empty();
}

}  // namespace

ConvergenceReport run_convergence(Spectral& sp, const SimConfig& base,
                                  const std::vector<double>& eps_ladder, const NormSpec& ns,
                                  const Field& v0) {
  auto t0 = Clock::now();
  validate_sim_config(base);
  validate_norm_spec(ns);
  require(sp.grid() == base.grid, "convergence: engine grid differs from config");
  require(v0.grid == base.grid && v0.tag == Tag::physical, "convergence: v0 grid mismatch");
  check_ladder(eps_ladder);
  check_resolution(base, eps_ladder);
  const int64_t nsteps = std::llround(base.T / base.dt);
  require(nsteps >= 1, "convergence: T shorter than one step");

  const GridSpec& g = base.grid;
  const size_t nlev = eps_ladder.size(), npair = nlev - 1;

  ConvergenceReport rep;
  rep.eps_ladder = eps_ladder;
  rep.norm_spec = ns;
  rep.gaps_norm.assign(npair, 0.0);
  rep.gaps_l2w.assign(npair, 0.0);
  rep.final_gaps_l2w.assign(npair, 0.0);
  rep.steps = uint64_t(nsteps);

  std::vector<std::unique_ptr<Member>> members;
  for (size_t i = 0; i < nlev; ++i) {
    SimConfig cfg = base;
    cfg.eps = eps_ladder[i];
    NoiseBundle b = build_bundle(sp, cfg.seed, cfg.stream, cfg.eps, cfg.amplitude,
                                 cfg.allow_coarse);
    std::string h = hash_field(b.xi);
    if (rep.xi_hash.empty())
      rep.xi_hash = h;
    else if (h != rep.xi_hash)
      throw std::logic_error("convergence: ladder coupling broken (xi differs across eps)");
    members.push_back(std::make_unique<Member>(sp, std::move(b), cfg, v0));
  }

  LPDecomp lpd(g);
  Field wm = weight_field(g, -0.1);
  std::vector<Field> vs(nlev);

  auto sample = [&](double t, bool is_final) {
    for (size_t i = 0; i < nlev; ++i) {
      if (!members[i]->walker.finite())
        throw NumericalAbort("convergence: non-finite state (eps = " +
                                 fmt_full(eps_ladder[i]) + ") at t = " + std::to_string(t),
                             t);
      vs[i] = members[i]->walker.v();
    }
    for (size_t j = 0; j < npair; ++j) {
      Field d = diff_field(vs[j], vs[j + 1]);
      double gn = norm(sp, lpd, d, ns);
      double gl = weighted_lp(d, wm, 2.0);
      rep.gaps_norm[j] = std::max(rep.gaps_norm[j], gn);
      rep.gaps_l2w[j] = std::max(rep.gaps_l2w[j], gl);
      if (is_final) rep.final_gaps_l2w[j] = gl;
    }
  };

  sample(0.0, nsteps == 0);
  int64_t done = 0;
  while (done < nsteps) {
    int blk = int(std::min<int64_t>(base.cadence, nsteps - done));
    for (auto& m : members) m->walker.advance(blk);
    done += blk;
    sample(double(done) * base.dt, done == nsteps);
  }

  rep.fitted_rate = fit_decay_rate(rep.gaps_norm);
  rep.monotone = strictly_decreasing(rep.gaps_norm);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

RenormReport run_renormalization_demo(Spectral& sp, const SimConfig& base,
                                      const std::vector<double>& eps_ladder,
                                      const Field& v0) {
  auto t0 = Clock::now();
  validate_sim_config(base);
  require(sp.grid() == base.grid, "renorm demo: engine grid differs from config");
  require(v0.grid == base.grid && v0.tag == Tag::physical, "renorm demo: v0 grid mismatch");
  check_ladder(eps_ladder);
  check_resolution(base, eps_ladder);
  const int64_t nsteps = std::llround(base.T / base.dt);
  require(nsteps >= 1, "renorm demo: T shorter than one step");

  const GridSpec& g = base.grid;
  const size_t nlev = eps_ladder.size(), npair = nlev - 1;

  RenormReport rep;
  rep.eps_ladder = eps_ladder;
  rep.corrected_gaps.assign(npair, 0.0);
  rep.corrected_sup_gaps.assign(npair, 0.0);
  rep.steps = uint64_t(nsteps);

  // corrected ladder, then the finest pair again with the counterterm
  // dropped: the raw flow of the same two realizations
  std::vector<std::unique_ptr<Member>> corr, unc;
  for (size_t i = 0; i < nlev; ++i) {
    SimConfig cfg = base;
    cfg.eps = eps_ladder[i];
    cfg.renormalize = true;
    NoiseBundle b = build_bundle(sp, cfg.seed, cfg.stream, cfg.eps, cfg.amplitude,
                                 cfg.allow_coarse);
    std::string h = hash_field(b.xi);
    if (rep.xi_hash.empty())
      rep.xi_hash = h;
    else if (h != rep.xi_hash)
      throw std::logic_error("renorm demo: ladder coupling broken (xi differs across eps)");
    rep.c_eps.push_back(b.c_eps);
    corr.push_back(std::make_unique<Member>(sp, std::move(b), cfg, v0));
  }
  for (size_t i = nlev - 2; i < nlev; ++i) {
    SimConfig cfg = base;
    cfg.eps = eps_ladder[i];
    cfg.renormalize = false;
    NoiseBundle b = build_bundle(sp, cfg.seed, cfg.stream, cfg.eps, cfg.amplitude,
                                 cfg.allow_coarse);
    unc.push_back(std::make_unique<Member>(sp, std::move(b), cfg, v0));
  }
  rep.delta_c = std::abs(rep.c_eps[nlev - 1] - rep.c_eps[nlev - 2]);

  Field wm = weight_field(g, -0.1);
  std::vector<Field> vc(nlev);

  auto sample = [&](double t, bool is_final) {
    for (size_t i = 0; i < nlev; ++i) {
      if (!corr[i]->walker.finite())
        throw NumericalAbort("renorm demo: non-finite corrected state at t = " +
                                 std::to_string(t),
                             t);
      vc[i] = corr[i]->walker.v();
    }
    for (size_t j = 0; j < npair; ++j) {
      double gl = weighted_lp(diff_field(vc[j], vc[j + 1]), wm, 2.0);
      rep.corrected_sup_gaps[j] = std::max(rep.corrected_sup_gaps[j], gl);
      if (is_final) rep.corrected_gaps[j] = gl;
    }
    Field vu0 = unc[0]->walker.v();
    Field vu1 = unc[1]->walker.v();
    if (!unc[0]->walker.finite() || !unc[1]->walker.finite())
      throw NumericalAbort("renorm demo: non-finite raw state at t = " + std::to_string(t),
                           t);
    double gu = weighted_lp(diff_field(vu0, vu1), wm, 2.0);
    rep.uncorrected_sup_gap = std::max(rep.uncorrected_sup_gap, gu);
    if (is_final) rep.uncorrected_finest_gap = gu;
    // w'(t) = e^{-i c_eps t} w(t): raw vs corrected is a pure phase, exactly
    for (size_t k = 0; k < 2; ++k) {
      const Field& wraw = unc[k]->walker.w();
      const Field& wcor = corr[nlev - 2 + k]->walker.w();
      cd ph = std::polar(1.0, -rep.c_eps[nlev - 2 + k] * t);
      double num = 0.0, den = 0.0;
      for (size_t i = 0; i < wraw.v.size(); ++i) {
        num += std::norm(wraw.v[i] - ph * wcor.v[i]);
        den += std::norm(wcor.v[i]);
      }
      rep.phase_identity_residual =
          std::max(rep.phase_identity_residual, std::sqrt(num / den));
    }
  };

  sample(0.0, nsteps == 0);
  int64_t done = 0;
  while (done < nsteps) {
    int blk = int(std::min<int64_t>(base.cadence, nsteps - done));
    for (auto& m : corr) m->walker.advance(blk);
    for (auto& m : unc) m->walker.advance(blk);
    done += blk;
    sample(double(done) * base.dt, done == nsteps);
  }

  rep.ratio = rep.corrected_gaps.back() > 0.0
                  ? rep.uncorrected_finest_gap / rep.corrected_gaps.back()
                  : 0.0;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

StochasticBoundsReport run_stochastic_campaign(const GridSpec& g,
                                               const std::vector<double>& eps_ladder, int M,
                                               uint64_t seed,
                                               const StochasticBoundsParams& prm) {
  require(M > 0, "campaign: M = 0 draws refused");
  return verify_stochastic_bounds(g, eps_ladder, M, seed, prm);
}

std::string convergence_csv(const ConvergenceReport& rep) {
  std::ostringstream os;
  os << "pair_index,eps_coarse,eps_fine,gap_Hs,gap_L2w\n";
  for (size_t j = 0; j + 1 < rep.eps_ladder.size(); ++j)
    os << j << ',' << fmt_full(rep.eps_ladder[j]) << ',' << fmt_full(rep.eps_ladder[j + 1])
       << ',' << fmt_full(rep.gaps_norm[j]) << ',' << fmt_full(rep.gaps_l2w[j]) << '\n';
  return os.str();
}

SvgPlot convergence_plot(const ConvergenceReport& rep) {
  SvgPlot plot;
  plot.title = "coupled eps-ladder gaps";
  plot.xlabel = "adjacent pair";
  plot.ylabel = "log2 gap";
  SvgSeries sn, sl;
  sn.label = describe(rep.norm_spec);
  sl.label = "L^2 weighted";
  for (size_t j = 0; j < rep.gaps_norm.size(); ++j) {
    if (rep.gaps_norm[j] > 0.0) {
      sn.x.push_back(double(j + 1));
      sn.y.push_back(std::log2(rep.gaps_norm[j]));
    }
    if (rep.gaps_l2w[j] > 0.0) {
      sl.x.push_back(double(j + 1));
      sl.y.push_back(std::log2(rep.gaps_l2w[j]));
    }
  }
  plot.series = {sn, sl};
  return plot;
}

std::string renorm_text(const RenormReport& rep) {
  std::ostringstream os;
  os << "wicknls renormalization demo\n";
  os << "eps_ladder";
  for (double e : rep.eps_ladder) os << ' ' << fmt_full(e);
  os << "\nc_eps";
  for (double c : rep.c_eps) os << ' ' << fmt_full(c);
  os << "\ndelta_c " << fmt_full(rep.delta_c) << '\n';
  os << "corrected_gaps_at_T";
  for (double gp : rep.corrected_gaps) os << ' ' << fmt_full(gp);
  os << "\ncorrected_sup_gaps";
  for (double gp : rep.corrected_sup_gaps) os << ' ' << fmt_full(gp);
  os << "\nuncorrected_finest_gap_at_T " << fmt_full(rep.uncorrected_finest_gap) << '\n';
  os << "uncorrected_sup_gap " << fmt_full(rep.uncorrected_sup_gap) << '\n';
  os << "ratio " << fmt_full(rep.ratio) << '\n';
  os << "phase_identity_residual " << fmt_full(rep.phase_identity_residual) << '\n';
  os << "xi_hash " << rep.xi_hash << '\n';
  os << "steps " << rep.steps << '\n';
  return os.str();
}

std::string campaign_text(const StochasticBoundsReport& rep) {
  std::ostringstream os;
  os << "wicknls stochastic campaign\n";
  os << "grid.n " << rep.grid.n << "\nbox.L " << fmt_full(rep.grid.L) << '\n';
  os << "seed " << rep.seed << "\ndraws " << rep.M << '\n';
  os << "params r " << fmt_full(rep.params.r) << " delta " << fmt_full(rep.params.delta)
     << " alpha " << fmt_full(rep.params.alpha) << " a " << fmt_full(rep.params.a)
     << " amplitude " << fmt_full(rep.params.amplitude) << '\n';
  os << "level eps c_eps grad_ratio exp_norm_median wick_center_t c_eps_mc_t\n";
  for (size_t i = 0; i < rep.eps.size(); ++i)
    os << i << ' ' << fmt_full(rep.eps[i]) << ' ' << fmt_full(rep.c_eps[i]) << ' '
       << fmt_full(rep.grad_ratio[i]) << ' ' << fmt_full(rep.exp_norm_median[i]) << ' '
       << fmt_full(rep.wick_center_t[i]) << ' ' << fmt_full(rep.c_eps_mc_t[i]) << '\n';
  os << "pair wick_gap_median y_gap_median\n";
  for (size_t j = 0; j < rep.wick_gap_median.size(); ++j)
    os << j << ' ' << fmt_full(rep.wick_gap_median[j]) << ' '
       << fmt_full(rep.y_gap_median[j]) << '\n';
  os << "grad_ratio_spread " << fmt_full(rep.grad_ratio_spread) << '\n';
  os << "exp_stability " << fmt_full(rep.exp_stability) << '\n';
  os << "monotone_fraction " << fmt_full(rep.monotone_fraction) << '\n';
  os << "wick_gap_decreasing " << (rep.wick_gap_decreasing ? "yes" : "no") << '\n';
  os << "y_gap_decreasing " << (rep.y_gap_decreasing ? "yes" : "no") << '\n';
  return os.str();
}

std::string ledger_csv(const EnergyLedger& led) {
  std::ostringstream os;
  os << "t,mass,e1,E,lap_term,F,G,H,intH\n";
  for (const LedgerRow& r : led.rows)
    os << fmt_full(r.t) << ',' << fmt_full(r.mass) << ',' << fmt_full(r.e1) << ','
       << fmt_full(r.E) << ',' << fmt_full(r.lap_term) << ',' << fmt_full(r.F) << ','
       << fmt_full(r.G) << ',' << fmt_full(r.H) << ',' << fmt_full(r.intH) << '\n';
  return os.str();
}

bool emit_file(const std::filesystem::path& dir, const std::string& rel,
               const std::string& content, RunManifest& man) {
  require(!rel.empty() && rel.find("..") == std::string::npos, "emit: bad relative path");
  std::filesystem::create_directories(dir);
  std::filesystem::path path = dir / rel;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::string sha = Sha256::of_string(content);
  RunManifest::Entry entry{sha, content.size(), rel};
  man.files.push_back(entry);
  if (std::filesystem::exists(path) && Sha256::of_file(path.string()) == sha) return true;
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "emit: cannot open " + path.string());
  os.write(content.data(), std::streamsize(content.size()));
  require(os.good(), "emit: write failed for " + path.string());
  return false;
}

std::string manifest_text(const RunManifest& man) {
  std::ostringstream os;
  os << "wicknls-manifest v1\n";
  os << "tool " << man.tool << '\n';
  os << "status " << man.status << '\n';
  os << "steps " << man.steps << '\n';
  os << "wall_seconds " << fmt_full(man.wall_seconds) << '\n';
  os << "config-begin\n" << man.config_echo << "config-end\n";
  for (const RunManifest::Entry& e : man.files)
    os << "file " << e.sha << ' ' << e.bytes << ' ' << e.rel << '\n';
  return os.str();
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& man) {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / "manifest.txt", std::ios::binary);
  require(os.good(), "manifest: cannot open " + (dir / "manifest.txt").string());
  std::string text = manifest_text(man);
  os.write(text.data(), std::streamsize(text.size()));
  require(os.good(), "manifest: write failed");
}

bool outputs_current(const std::filesystem::path& dir, const std::string& tool,
                     const std::string& config_echo, std::string* status_out) {
  std::ifstream is(dir / "manifest.txt");
  if (!is) return false;
  std::string line;
  if (!std::getline(is, line) || line != "wicknls-manifest v1") return false;
  std::string mtool, mstatus, mconfig;
  std::vector<RunManifest::Entry> entries;
  bool in_config = false;
  while (std::getline(is, line)) {
    if (in_config) {
      if (line == "config-end")
        in_config = false;
      else
        mconfig += line + '\n';
      continue;
    }
    if (line == "config-begin") {
      in_config = true;
    } else if (line.rfind("tool ", 0) == 0) {
      mtool = line.substr(5);
    } else if (line.rfind("status ", 0) == 0) {
      mstatus = line.substr(7);
    } else if (line.rfind("file ", 0) == 0) {
      std::istringstream ls(line.substr(5));
      RunManifest::Entry e;
      if (!(ls >> e.sha >> e.bytes >> e.rel)) return false;
      entries.push_back(e);
    }
  }
  if (status_out) *status_out = mstatus;
  if (mtool != tool || mconfig != config_echo) return false;
  for (const RunManifest::Entry& e : entries) {
    std::filesystem::path p = dir / e.rel;
    if (!std::filesystem::exists(p)) return false;
    if (std::filesystem::file_size(p) != e.bytes) return false;
    if (Sha256::of_file(p.string()) != e.sha) return false;
  }
  return true;
}

}  // namespace wicknls
