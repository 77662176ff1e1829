#include "wicknls/energetics.hpp"

#include <cmath>
#include <string>

#include "wicknls/dynamics.hpp"

namespace wicknls {

namespace {

void check_pair(const Field& v, const GaugeContext& ctx, const char* who) {
  require(v.grid == ctx.bundle.Y_eps.grid && v.tag == Tag::physical,
          std::string(who) + ": physical v on the context's grid");
}

}  // namespace

double mass(const Field& v, const GaugeContext& ctx) {
  check_pair(v, ctx, "mass");
  const GridSpec& g = v.grid;
  double s = 0.0;
  for (size_t i = 0; i < v.v.size(); ++i) s += std::norm(v.v[i]) * ctx.exp_m2Y.v[i].real();
  return g.h() * g.h() * s;
}

double h1_energy(Spectral& sp, const Field& v, const GaugeContext& ctx, double lambda,
                 double p) {
  check_pair(v, ctx, "h1_energy");
  require(p == ctx.p, "h1_energy: p differs from the gauge context's");
  const GridSpec& g = v.grid;
  auto [gx, gy] = sp.gradient(v);
  const Field& Vt = ctx.bundle.v_tilde;
  double kin = 0.0, pot = 0.0, def = 0.0;
  for (size_t i = 0; i < v.v.size(); ++i) {
    double e2 = ctx.exp_m2Y.v[i].real();
    double a2 = std::norm(v.v[i]);
    kin += (std::norm(gx.v[i]) + std::norm(gy.v[i])) * e2;
    pot += a2 * Vt.v[i].real() * e2;
    if (lambda != 0.0)
      def += std::pow(a2, 0.5 * (p + 2.0)) * e2 * ctx.exp_mpY.v[i].real();
  }
  double h2 = g.h() * g.h();
  return 0.5 * h2 * kin - 0.5 * h2 * pot + lambda / (p + 2.0) * h2 * def;
}

double linear_h1_w(Spectral& sp, const Field& w, const Field& v_pr) {
  require(w.grid == v_pr.grid && w.tag == Tag::physical && v_pr.tag == Tag::physical,
          "linear_h1_w: physical fields on one grid");
  const GridSpec& g = w.grid;
  auto [gx, gy] = sp.gradient(w);
  double s = 0.0;
  for (size_t i = 0; i < w.v.size(); ++i)
    s += std::norm(gx.v[i]) + std::norm(gy.v[i]) - v_pr.v[i].real() * std::norm(w.v[i]);
  return g.h() * g.h() * s;
}

LedgerRow modified_energy(Spectral& sp, const Field& v, const Field& vt,
                          const GaugeContext& ctx, double lambda, double p) {
  check_pair(v, ctx, "modified_energy");
  require(vt.grid == v.grid && vt.tag == Tag::physical, "modified_energy: vt grid mismatch");
  require(p == ctx.p, "modified_energy: p differs from the gauge context's");
  const GridSpec& g = v.grid;
  const size_t nn = v.v.size();

  Field lap = sp.laplacian(v);
  auto [gx, gy] = sp.gradient(v);
  const Field& gAx = ctx.bundle.grad_Y_eps_x;
  const Field& gAy = ctx.bundle.grad_Y_eps_y;
  const Field& Vtf = ctx.bundle.v_tilde;

  double maxabs2 = 0.0;
  for (size_t i = 0; i < nn; ++i) maxabs2 = std::max(maxabs2, std::norm(v.v[i]));
  const double fl = 1e-14 * std::max(maxabs2, 1e-300);

  // term accumulators; each is h^2 * sum of its integrand
  double lap_term = 0.0, massv = 0.0;
  double f1 = 0.0, f2 = 0.0, f3 = 0.0, f4 = 0.0, f5 = 0.0;
  double g1 = 0.0, g2 = 0.0, g3 = 0.0, g4 = 0.0, g5 = 0.0;
  double h1 = 0.0, h2t = 0.0, h3 = 0.0, h4 = 0.0;

  for (size_t i = 0; i < nn; ++i) {
    const cd vi = v.v[i], vti = vt.v[i];
    const cd gxi = gx.v[i], gyi = gy.v[i];
    const cd lapi = lap.v[i];
    const double ax = gAx.v[i].real(), ay = gAy.v[i].real();
    const double V = Vtf.v[i].real();
    const double e2 = ctx.exp_m2Y.v[i].real();
    const double ep = e2 * ctx.exp_mpY.v[i].real();

    const cd AdotV = ax * gxi + ay * gyi;
    const double absv2 = std::norm(vi);
    const double vp = std::pow(absv2 + fl, 0.5 * p);
    const double vpm2 = std::pow(absv2 + fl, 0.5 * (p - 2.0));
    const double g2x = 2.0 * (std::conj(vi) * gxi).real();
    const double g2y = 2.0 * (std::conj(vi) * gyi).real();
    const double grad_abs2_sq = g2x * g2x + g2y * g2y;
    const double gpx = 0.5 * p * vpm2 * g2x;
    const double gpy = 0.5 * p * vpm2 * g2y;
    const double gradv2 = std::norm(gxi) + std::norm(gyi);

    lap_term += std::norm(lapi) * e2;
    massv += absv2 * e2;

    f1 += -4.0 * (lapi * std::conj(AdotV)).real() * e2;
    f2 += 4.0 * std::norm(AdotV) * e2;
    f3 += 2.0 *
          (vi * (std::conj(gxi) * (-2.0 * e2 * ax) + std::conj(gyi) * (-2.0 * e2 * ay)))
              .real() *
          V;
    f4 += 2.0 * (lapi * std::conj(vi)).real() * V * e2;
    f5 += absv2 * V * V * e2;

    g1 += -gradv2 * vp * ep;
    g2 += -2.0 * (vi * (gpx * std::conj(gxi) + gpy * std::conj(gyi))).real() * ep;
    g3 += 0.25 * p * grad_abs2_sq * vpm2 * ep;
    g4 += 2.0 / (p + 2.0) * std::pow(absv2, 0.5 * (p + 2.0)) * V * ep;
    g5 += 2.0 * p * (vi * vp * std::conj(AdotV)).real() * ep;

    const double re_vbar_vt = (std::conj(vi) * vti).real();
    const double d_vp = p * vpm2 * re_vbar_vt;
    h1 += -gradv2 * d_vp * ep;
    h2t += -2.0 * (vti * (gpx * std::conj(gxi) + gpy * std::conj(gyi))).real() * ep;
    if (p != 2.0) {
      const double vpm4 = std::pow(absv2 + fl, 0.5 * (p - 4.0));
      h3 += -0.25 * p * (p - 2.0) * grad_abs2_sq * vpm4 * re_vbar_vt * ep;
    }
    const cd d_vvp = vti * vp + vi * d_vp;
    h4 += 2.0 * p * (d_vvp * std::conj(AdotV)).real() * ep;
  }

  const double hh = g.h() * g.h();
  LedgerRow row;
  row.mass = hh * massv;
  row.lap_term = hh * lap_term;
  row.F = hh * (f1 + f2 + f3 + f4 + f5);
  row.G = hh * (g1 + g2 + g3 + g4 + g5);
  row.H = hh * (h1 + h2t + h3 + h4);
  row.E = row.lap_term + row.F - lambda * row.G;
  return row;
}

void validate_ledger(const EnergyLedger& led, double lambda) {
  require(!led.rows.empty(), "ledger: no rows");
  double escale = 0.0;
  for (const LedgerRow& r : led.rows)
    escale = std::max({escale, std::abs(r.E), std::abs(r.lap_term)});
  escale = std::max(escale, 1.0);
  const LedgerRow* prev = nullptr;
  for (const LedgerRow& r : led.rows) {
    bool finite = std::isfinite(r.t) && std::isfinite(r.mass) && std::isfinite(r.e1) &&
                  std::isfinite(r.E) && std::isfinite(r.lap_term) && std::isfinite(r.F) &&
                  std::isfinite(r.G) && std::isfinite(r.H) && std::isfinite(r.intH);
    require(finite, "ledger: non-finite entry at t = " + std::to_string(r.t));
    double resid = std::abs(r.E - (r.lap_term + r.F - lambda * r.G));
    require(resid <= 1e-12 * escale, "ledger: E != lap_term + F - lambda G at t = " +
                                         std::to_string(r.t));
    if (prev) {
      require(r.t > prev->t, "ledger: times fail to increase");
      double expect = prev->intH + 0.5 * (prev->H + r.H) * (r.t - prev->t);
      double hscale = std::max({std::abs(r.intH), std::abs(prev->intH), 1.0});
      require(std::abs(r.intH - expect) <= 1e-12 * hscale,
              "ledger: intH is not the trapezoid of H");
    } else {
      require(r.intH == 0.0, "ledger: intH must start at zero");
    }
    prev = &r;
  }
}

std::vector<double> weighted_diagnostics(Spectral& sp, const LPDecomp& lp, const Field& v,
                                         const std::vector<NormSpec>& specs) {
  static const std::vector<NormSpec> kDefault = {sobolev_norm(2.0, -0.25),
                                                 sobolev_norm(1.5, 0.0)};
  const std::vector<NormSpec>& use = specs.empty() ? kDefault : specs;
  std::vector<double> out;
  out.reserve(use.size());
  for (const NormSpec& s : use) out.push_back(norm(sp, lp, v, s));
  return out;
}

AuditReport energy_audit(const SimConfig& cfg, const Field& v0) {
  validate_sim_config(cfg);
  require(v0.grid == cfg.grid && v0.tag == Tag::physical, "audit: v0 grid mismatch");
  const int64_t nsteps = std::llround(cfg.T / cfg.dt);
  require(nsteps >= 1, "audit: T shorter than one step");

  Spectral sp(cfg.grid);
  NoiseBundle coarse =
      build_bundle(sp, cfg.seed, cfg.stream, cfg.eps, cfg.amplitude, cfg.allow_coarse);
  GaugeContext ctx(coarse, cfg.p);

  GridSpec fine{2 * cfg.grid.n, cfg.grid.L};
  Spectral spf(fine);
  GaugeContext fctx(refine_bundle(sp, spf, coarse), cfg.p);

  StrangWalker walker(sp, ctx, cfg, v0);

  AuditReport rep;
  auto record = [&](double t) {
    if (!walker.finite())
      throw NumericalAbort("audit: non-finite state at t = " + std::to_string(t),
                           rep.ledger.rows.empty() ? 0.0 : rep.ledger.rows.back().t);
    Field wh = sp.forward(walker.w());
    Field whf = embed_spectral(wh, fine);
    Field vf = spf.inverse(whf);
    for (size_t i = 0; i < vf.v.size(); ++i) vf.v[i] *= fctx.exp_Y.v[i].real();
    Field vtf = v_equation_rhs(spf, fctx, vf, cfg.lambda, cfg.p);
    LedgerRow row = modified_energy(spf, vf, vtf, fctx, cfg.lambda, cfg.p);
    row.t = t;
    row.e1 = h1_energy(spf, vf, fctx, cfg.lambda, cfg.p);
    if (!rep.ledger.rows.empty()) {
      const LedgerRow& prev = rep.ledger.rows.back();
      row.intH = prev.intH + 0.5 * (prev.H + row.H) * (t - prev.t);
    }
    rep.ledger.rows.push_back(row);
  };

  record(0.0);
  for (int64_t m = 1; m <= nsteps; ++m) {
    walker.advance(1);
    record(double(m) * cfg.dt);
  }

  rep.e0 = rep.ledger.rows.front().E;
  const double m0 = rep.ledger.rows.front().mass;
  const double escale = std::max(std::abs(rep.e0), 1.0);
  for (const LedgerRow& r : rep.ledger.rows) {
    rep.max_residual =
        std::max(rep.max_residual, std::abs(r.E - rep.e0 + cfg.lambda * r.intH) / escale);
    rep.mass_drift = std::max(rep.mass_drift, std::abs(r.mass - m0) / std::abs(m0));
  }
  return rep;
}

}  // namespace wicknls
