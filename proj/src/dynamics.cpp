#include "wicknls/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace wicknls {

namespace {

bool all_finite(const std::vector<cd>& v) {
  for (const cd& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double max_abs_pow(const std::vector<cd>& v, double p) {
  double m = 0.0;
  for (const cd& z : v) m = std::max(m, std::norm(z));
  return std::pow(m, 0.5 * p);
}

// |w|^p per site; p = 2 avoids the pow
void modulus_pow(const std::vector<cd>& w, double p, std::vector<double>& s) {
  s.resize(w.size());
  if (p == 2.0) {
    for (size_t i = 0; i < w.size(); ++i) s[i] = std::norm(w[i]);
  } else {
    for (size_t i = 0; i < w.size(); ++i) s[i] = std::pow(std::norm(w[i]), 0.5 * p);
  }
}

// zero every mode with max(|m1|, |m2|) > n/3 (the 2/3 rule)
void mask_spectrum(const GridSpec& g, std::vector<cd>& a) {
  for (int a1 = 0; a1 < g.n; ++a1) {
    int m1 = std::abs(g.mode(a1));
    for (int a2 = 0; a2 < g.n; ++a2) {
      int m2 = std::abs(g.mode(a2));
      if (3 * std::max(m1, m2) > g.n) a[size_t(a1) * g.n + a2] = 0.0;
    }
  }
}

void mask_real(Spectral& sp, const GridSpec& g, std::vector<double>& s) {
  std::vector<cd> tmp(s.begin(), s.end());
  sp.forward_inplace(tmp);
  mask_spectrum(g, tmp);
  sp.inverse_inplace(tmp);
  for (size_t i = 0; i < s.size(); ++i) s[i] = tmp[i].real();
}

// w <- exp(i c (V_pr - lambda |w|^p)) w with c = -factor*dt folded in by the caller
void apply_phase(Spectral& sp, const GridSpec& g, std::vector<cd>& w,
                 const std::vector<double>& vpr, double lambda, double p, double c,
                 bool dealias) {
  if (lambda == 0.0) {
    for (size_t i = 0; i < w.size(); ++i) w[i] *= std::polar(1.0, c * vpr[i]);
    return;
  }
  static thread_local std::vector<double> s;
  modulus_pow(w, p, s);
  if (dealias) mask_real(sp, g, s);
  for (size_t i = 0; i < w.size(); ++i)
    w[i] *= std::polar(1.0, c * (vpr[i] - lambda * s[i]));
}

std::vector<cd> linear_multiplier(const GridSpec& g, double dt) {
  std::vector<cd> m(size_t(g.size()));
  for (int a1 = 0; a1 < g.n; ++a1) {
    double k1 = g.kfreq(a1);
    for (int a2 = 0; a2 < g.n; ++a2) {
      double k2 = g.kfreq(a2);
      m[size_t(a1) * g.n + a2] = std::polar(1.0, dt * (k1 * k1 + k2 * k2));
    }
  }
  return m;
}

std::vector<double> potential_values(const GaugeContext& ctx, bool renormalize) {
  const Field& xe = ctx.bundle.xi_eps;
  std::vector<double> vpr(xe.v.size());
  double c = renormalize ? ctx.c_eps : 0.0;
  for (size_t i = 0; i < vpr.size(); ++i) vpr[i] = xe.v[i].real() - c;
  return vpr;
}

}  // namespace

void validate_sim_config(const SimConfig& cfg) {
  require(cfg.grid.n >= 8, "config: grid not set");
  require(cfg.eps > 0.0, "config: eps must be positive");
  require(cfg.dt > 0.0, "config: dt must be positive");
  require(cfg.T > 0.0, "config: T must be positive");
  require(cfg.p >= 1.0, "config: p must be >= 1");
  require(cfg.lambda >= 0.0, "config: lambda must be >= 0 (defocusing)");
  require(cfg.cadence >= 1, "config: cadence must be >= 1");
  require(cfg.amplitude >= 0.0, "config: noise amplitude must be >= 0");
}

Field step_strang(Spectral& sp, const Field& w, double dt, const Field& v_pr,
                  double lambda, double p, bool dealias) {
  const GridSpec& g = sp.grid();
  require(w.grid == g && w.tag == Tag::physical, "step: physical w on the engine's grid");
  require(v_pr.grid == g && v_pr.tag == Tag::physical, "step: potential grid mismatch");
  std::vector<double> vpr(v_pr.v.size());
  for (size_t i = 0; i < vpr.size(); ++i) vpr[i] = v_pr.v[i].real();
  std::vector<cd> linmul = linear_multiplier(g, dt);

  Field out = w;
  apply_phase(sp, g, out.v, vpr, lambda, p, -0.5 * dt, dealias);
  sp.forward_inplace(out.v);
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] *= linmul[i];
  sp.inverse_inplace(out.v);
  apply_phase(sp, g, out.v, vpr, lambda, p, -0.5 * dt, dealias);
  return out;
}

StrangWalker::StrangWalker(Spectral& sp, const GaugeContext& ctx, const SimConfig& cfg,
                           const Field& v0)
    : sp_(sp), ctx_(ctx), cfg_(cfg), w_(to_primitive(v0, ctx)),
      vpr_(potential_values(ctx, cfg.renormalize)),
      linmul_(linear_multiplier(sp.grid(), cfg.dt)) {
  require(sp.grid() == cfg.grid, "walker: engine grid differs from config");
  for (double v : vpr_) max_vpr_ = std::max(max_vpr_, std::abs(v));
  if (cfg_.lambda == 0.0) {
    phase_full_.resize(vpr_.size());
    phase_half_.resize(vpr_.size());
    for (size_t i = 0; i < vpr_.size(); ++i) {
      phase_full_[i] = std::polar(1.0, -cfg_.dt * vpr_[i]);
      phase_half_[i] = std::polar(1.0, -0.5 * cfg_.dt * vpr_[i]);
    }
  }
}

void StrangWalker::phase(double factor) {
  if (cfg_.lambda == 0.0) {
    const std::vector<cd>& tab = factor == 1.0 ? phase_full_ : phase_half_;
    for (size_t i = 0; i < w_.v.size(); ++i) w_.v[i] *= tab[i];
    return;
  }
  apply_phase(sp_, cfg_.grid, w_.v, vpr_, cfg_.lambda, cfg_.p, -factor * cfg_.dt,
              cfg_.dealias);
}

void StrangWalker::linear() {
  sp_.forward_inplace(w_.v);
  for (size_t i = 0; i < w_.v.size(); ++i) w_.v[i] *= linmul_[i];
  sp_.inverse_inplace(w_.v);
}

void StrangWalker::advance(int nsteps) {
  if (nsteps <= 0) return;
  phase(0.5);
  for (int m = 0; m < nsteps; ++m) {
    linear();
    if (m + 1 < nsteps) phase(1.0);
  }
  phase(0.5);
  step_ += uint64_t(nsteps);
}

Field StrangWalker::v() const { return from_primitive(w_, ctx_); }

bool StrangWalker::finite() const { return all_finite(w_.v); }

Field v_equation_rhs(Spectral& sp, const GaugeContext& ctx, const Field& v, double lambda,
                     double p, bool dealias) {
  const GridSpec& g = sp.grid();
  require(v.grid == g && v.tag == Tag::physical, "v_rhs: physical v on the engine's grid");
  auto [gx, gy] = sp.gradient(v);
  Field lap = sp.laplacian(v);
  const Field& gAx = ctx.bundle.grad_Y_eps_x;
  const Field& gAy = ctx.bundle.grad_Y_eps_y;
  const Field& Vt = ctx.bundle.v_tilde;

  Field nl(g, Tag::physical);
  if (lambda != 0.0) {
    for (size_t i = 0; i < v.v.size(); ++i) {
      double vp = p == 2.0 ? std::norm(v.v[i]) : std::pow(std::norm(v.v[i]), 0.5 * p);
      nl.v[i] = lambda * v.v[i] * vp * ctx.exp_mpY.v[i].real();
    }
    if (dealias) {
      sp.forward_inplace(nl.v);
      mask_spectrum(g, nl.v);
      sp.inverse_inplace(nl.v);
    }
  }

  Field out(g, Tag::physical);
  const cd mi(0.0, -1.0);
  for (size_t i = 0; i < v.v.size(); ++i) {
    cd drift = gx.v[i] * gAx.v[i].real() + gy.v[i] * gAy.v[i].real();
    out.v[i] = mi * (lap.v[i] + Vt.v[i].real() * v.v[i] - 2.0 * drift - nl.v[i]);
  }
  return out;
}

namespace {

// shared sampling scaffold: records time/snapshot and, when asked, the
// ledger row with trapezoidal intH accumulation
struct Sampler {
  Spectral& sp;
  const GaugeContext& ctx;
  const SimConfig& cfg;
  Trajectory& traj;
  bool with_ledger;

  void operator()(const Field& v, double t) {
    if (!all_finite(v.v))
      throw NumericalAbort("integrator: non-finite state at t = " + std::to_string(t),
                           traj.times.empty() ? 0.0 : traj.times.back());
    if (with_ledger) {
      Field vt = v_equation_rhs(sp, ctx, v, cfg.lambda, cfg.p);
      LedgerRow row = modified_energy(sp, v, vt, ctx, cfg.lambda, cfg.p);
      row.t = t;
      row.e1 = h1_energy(sp, v, ctx, cfg.lambda, cfg.p);
      if (!traj.ledger.rows.empty()) {
        const LedgerRow& prev = traj.ledger.rows.back();
        row.intH = prev.intH + 0.5 * (prev.H + row.H) * (t - prev.t);
      }
      traj.ledger.rows.push_back(row);
    }
    traj.times.push_back(t);
    traj.snapshots.push_back(v);
  }
};

template <class Rhs>
void rk4_march(const SimConfig& cfg, Field& state, int64_t nsteps, Rhs rhs,
               const std::function<void(const Field&, double)>& sample) {
  const double dt = cfg.dt;
  Field k1, k2, k3, k4, tmp;
  for (int64_t m = 1; m <= nsteps; ++m) {
    k1 = rhs(state);
    tmp = state;
    for (size_t i = 0; i < tmp.v.size(); ++i) tmp.v[i] += 0.5 * dt * k1.v[i];
    k2 = rhs(tmp);
    tmp = state;
    for (size_t i = 0; i < tmp.v.size(); ++i) tmp.v[i] += 0.5 * dt * k2.v[i];
    k3 = rhs(tmp);
    tmp = state;
    for (size_t i = 0; i < tmp.v.size(); ++i) tmp.v[i] += dt * k3.v[i];
    k4 = rhs(tmp);
    for (size_t i = 0; i < state.v.size(); ++i)
      state.v[i] += dt / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
    if (m % cfg.cadence == 0 || m == nsteps) sample(state, double(m) * dt);
  }
}

}  // namespace

Trajectory evolve(Spectral& sp, const SimConfig& cfg, const Field& v0, bool with_ledger) {
  validate_sim_config(cfg);
  require(sp.grid() == cfg.grid, "evolve: engine grid differs from config");
  require(v0.grid == cfg.grid && v0.tag == Tag::physical, "evolve: v0 grid mismatch");
  const int64_t nsteps = std::llround(cfg.T / cfg.dt);
  require(nsteps >= 1, "evolve: T shorter than one step");

  NoiseBundle bundle =
      build_bundle(sp, cfg.seed, cfg.stream, cfg.eps, cfg.amplitude, cfg.allow_coarse);
  GaugeContext ctx(std::move(bundle), cfg.p);

  Trajectory traj;
  traj.config = cfg;
  traj.c_eps = ctx.c_eps;
  traj.steps = uint64_t(nsteps);
  Sampler sample{sp, ctx, cfg, traj, with_ledger};

  switch (cfg.scheme) {
    case Scheme::strang_primitive: {
      StrangWalker walker(sp, ctx, cfg, v0);
      traj.phase_resolution =
          cfg.dt * (walker.max_vpr() + cfg.lambda * max_abs_pow(walker.w().v, cfg.p));
      sample(v0, 0.0);
      int64_t done = 0;
      while (done < nsteps) {
        int blk = int(std::min<int64_t>(cfg.cadence, nsteps - done));
        walker.advance(blk);
        done += blk;
        sample(walker.v(), walker.t());
      }
      break;
    }
    case Scheme::dense_oracle: {
      Field w = to_primitive(v0, ctx);
      std::vector<double> vpr = potential_values(ctx, cfg.renormalize);
      double mv = 0.0;
      for (double x : vpr) mv = std::max(mv, std::abs(x));
      traj.phase_resolution = cfg.dt * (mv + cfg.lambda * max_abs_pow(w.v, cfg.p));
      sample(v0, 0.0);
      auto rhs = [&](const Field& u) {
        Field lap = sp.laplacian(u);
        Field out(cfg.grid, Tag::physical);
        const cd mi(0.0, -1.0);
        for (size_t i = 0; i < u.v.size(); ++i) {
          double up = cfg.p == 2.0 ? std::norm(u.v[i]) : std::pow(std::norm(u.v[i]), 0.5 * cfg.p);
          out.v[i] = mi * (lap.v[i] + vpr[i] * u.v[i] - cfg.lambda * up * u.v[i]);
        }
        return out;
      };
      rk4_march(cfg, w, nsteps, rhs,
                [&](const Field& wm, double t) { sample(from_primitive(wm, ctx), t); });
      break;
    }
    case Scheme::direct_v_rk4: {
      Field v = v0;
      std::vector<double> vpr = potential_values(ctx, cfg.renormalize);
      double mv = 0.0;
      for (double x : vpr) mv = std::max(mv, std::abs(x));
      traj.phase_resolution = cfg.dt * (mv + cfg.lambda * max_abs_pow(v0.v, cfg.p));
      sample(v0, 0.0);
      auto rhs = [&](const Field& u) {
        return v_equation_rhs(sp, ctx, u, cfg.lambda, cfg.p, cfg.dealias);
      };
      rk4_march(cfg, v, nsteps, rhs, [&](const Field& vm, double t) { sample(vm, t); });
      break;
    }
  }
  return traj;
}

Trajectory linear_propagate(Spectral& sp, SimConfig cfg, const Field& phi) {
  cfg.lambda = 0.0;
  return evolve(sp, cfg, phi, true);
}

double strichartz_norm(const Trajectory& traj, double l, double q, double mu) {
  require(l >= 1.0 && q >= 1.0, "strichartz: exponents must be >= 1");
  require(traj.snapshots.size() == traj.times.size() && !traj.times.empty(),
          "strichartz: trajectory carries no snapshots");
  const GridSpec& g = traj.snapshots.front().grid;
  Field w = weight_field(g, mu);
  std::vector<double> nq(traj.snapshots.size());
  for (size_t i = 0; i < nq.size(); ++i) nq[i] = weighted_lp(traj.snapshots[i], w, q);
  if (traj.times.size() == 1) return 0.0;
  double s = 0.0;
  for (size_t i = 0; i + 1 < nq.size(); ++i)
    s += 0.5 * (std::pow(nq[i], l) + std::pow(nq[i + 1], l)) *
         (traj.times[i + 1] - traj.times[i]);
  return std::pow(s, 1.0 / l);
}

}  // namespace wicknls
