#include "wicknls/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wicknls/rng.hpp"
#include "wicknls/special.hpp"

namespace wicknls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_exp(double x) {
  std::ostringstream ss;
  ss << x;
  return ss.str();
}

std::string fmt_pq(double p) { return std::isinf(p) ? "inf" : fmt_exp(p); }

// wrapped distance to the origin (minimum over periodic images per axis)
double wrapped_d(const GridSpec& g, int j1, int j2) {
  double x = std::abs(g.coord(j1)), y = std::abs(g.coord(j2));
  x = std::min(x, g.L - x);
  y = std::min(y, g.L - y);
  return std::hypot(x, y);
}

}  // namespace

NormSpec sobolev_norm(double s, double mu) { return {NormKind::sobolev_hs, s, 2.0, 2.0, mu}; }
NormSpec holder_norm(double alpha, double mu) { return {NormKind::holder, alpha, kInf, kInf, mu}; }
NormSpec lebesgue_norm(double p, double mu) { return {NormKind::lebesgue, 0.0, p, 2.0, mu}; }
NormSpec w1p_norm(double p, double mu) { return {NormKind::sobolev_w1p, 0.0, p, 2.0, mu}; }
NormSpec besov_spec(double alpha, double p, double q, double mu) {
  return {NormKind::besov, alpha, p, q, mu};
}

void validate_norm_spec(const NormSpec& spec) {
  require(spec.p >= 1.0, "norm spec: p must lie in [1, inf]");
  require(spec.q >= 1.0, "norm spec: q must lie in [1, inf]");
}

std::string describe(const NormSpec& spec) {
  std::ostringstream ss;
  switch (spec.kind) {
    case NormKind::lebesgue:
      ss << "L^{" << fmt_pq(spec.p) << "}_{" << fmt_exp(spec.mu) << "}";
      break;
    case NormKind::sobolev_w1p:
      ss << "W^{1," << fmt_pq(spec.p) << "}_{" << fmt_exp(spec.mu) << "}";
      break;
    case NormKind::sobolev_hs:
      ss << "H^{" << fmt_exp(spec.alpha) << "}_{" << fmt_exp(spec.mu) << "}";
      break;
    case NormKind::holder:
      ss << "C^{" << fmt_exp(spec.alpha) << "}_{" << fmt_exp(spec.mu) << "}";
      break;
    case NormKind::besov:
      ss << "B^{" << fmt_exp(spec.alpha) << "}_{" << fmt_pq(spec.p) << "," << fmt_pq(spec.q)
         << "," << fmt_exp(spec.mu) << "}";
      break;
  }
  return ss.str();
}

LPDecomp::LPDecomp(const GridSpec& g) : g_(g) {
  double nmax = std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(0.9 * g.nyquist()))));
  levels_.push_back(0.5);
  for (double N = 1.0; N <= nmax; N *= 2.0) levels_.push_back(N);

  int n = g.n;
  for (double N : levels_) {
    std::vector<double> s(static_cast<size_t>(g.size()));
    for (int a1 = 0; a1 < n; ++a1) {
      double kx = g.kfreq(a1);
      for (int a2 = 0; a2 < n; ++a2) {
        double ky = g.kfreq(a2);
        double kabs = std::hypot(kx, ky);
        double val = (N == 0.5) ? lp_psi(kabs)
                                : lp_psi(kabs / (2.0 * N)) - lp_psi(kabs / N);
        s[static_cast<size_t>(a1) * n + a2] = val;
      }
    }
    symbols_.push_back(std::move(s));
  }
}

Field LPDecomp::project(Spectral& sp, const Field& f, double N) const {
  require(f.grid == g_ && sp.grid() == g_, "lp_project: grid mismatch");
  size_t idx = levels_.size();
  for (size_t i = 0; i < levels_.size(); ++i)
    if (levels_[i] == N) idx = i;
  require(idx < levels_.size(), "lp_project: level outside the grid's dyadic range");

  Field fh = (f.tag == Tag::spectral) ? f : sp.forward(f);
  const auto& s = symbols_[idx];
  for (size_t i = 0; i < fh.v.size(); ++i) fh.v[i] *= s[i];
  return (f.tag == Tag::spectral) ? fh : sp.inverse(fh);
}

Field weight_field(const GridSpec& g, double mu) {
  Field w(g, Tag::physical);
  for (int j1 = 0; j1 < g.n; ++j1)
    for (int j2 = 0; j2 < g.n; ++j2) {
      double d = wrapped_d(g, j1, j2);
      w.at(j1, j2) = std::pow(1.0 + d * d, 0.5 * mu);
    }
  return w;
}

double weighted_lp(const Field& f, const Field& w, double p) {
  require(f.grid == w.grid && f.tag == Tag::physical, "weighted_lp: physical fields on one grid");
  if (std::isinf(p)) {
    double m = 0.0;
    for (size_t i = 0; i < f.v.size(); ++i) m = std::max(m, std::abs(f.v[i]) * w.v[i].real());
    return m;
  }
  double s = 0.0;
  for (size_t i = 0; i < f.v.size(); ++i) s += std::pow(std::abs(f.v[i]) * w.v[i].real(), p);
  double h = f.grid.h();
  return std::pow(h * h * s, 1.0 / p);
}

namespace {

double besov_value(Spectral& sp, const LPDecomp& lp, const Field& f, double alpha, double p,
                   double q, double mu) {
  const GridSpec& g = lp.grid();
  Field w = weight_field(g, mu);
  Field fh = (f.tag == Tag::spectral) ? f : sp.forward(f);

  double acc = 0.0;
  Field blk(g, Tag::spectral);
  for (size_t lev = 0; lev < lp.levels().size(); ++lev) {
    const auto& s = lp.symbols()[lev];
    for (size_t i = 0; i < fh.v.size(); ++i) blk.v[i] = fh.v[i] * s[i];
    Field b = sp.inverse(blk);
    double nb = weighted_lp(b, w, p);
    double val = std::pow(std::max(lp.levels()[lev], 1.0), alpha) * nb;
    if (std::isinf(q))
      acc = std::max(acc, val);
    else
      acc += std::pow(val, q);
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

}  // namespace

double norm(Spectral& sp, const LPDecomp& lp, const Field& f, const NormSpec& spec) {
  validate_norm_spec(spec);
  require(f.grid == lp.grid() && sp.grid() == lp.grid(), "norm: grid mismatch");
  switch (spec.kind) {
    case NormKind::lebesgue: {
      const Field& ph = f;
      require(ph.tag == Tag::physical, "norm: lebesgue norms act on physical fields");
      return weighted_lp(ph, weight_field(f.grid, spec.mu), spec.p);
    }
    case NormKind::sobolev_w1p: {
      require(f.tag == Tag::physical, "norm: W^{1,p} norms act on physical fields");
      Field w = weight_field(f.grid, spec.mu);
      auto [fx, fy] = sp.gradient(f);
      Field gmag(f.grid, Tag::physical);
      for (size_t i = 0; i < f.v.size(); ++i)
        gmag.v[i] = std::hypot(std::abs(fx.v[i]), std::abs(fy.v[i]));
      return weighted_lp(f, w, spec.p) + weighted_lp(gmag, w, spec.p);
    }
    case NormKind::sobolev_hs:
      return besov_value(sp, lp, f, spec.alpha, 2.0, 2.0, spec.mu);
    case NormKind::holder:
      return besov_value(sp, lp, f, spec.alpha, kInf, kInf, spec.mu);
    case NormKind::besov:
      return besov_value(sp, lp, f, spec.alpha, spec.p, spec.q, spec.mu);
  }
  throw std::logic_error("norm: unhandled kind");
}

double check_pull_weight(Spectral& sp, const LPDecomp& lp, const Field& f,
                         const NormSpec& spec) {
  require(spec.kind == NormKind::besov || spec.kind == NormKind::sobolev_hs ||
              spec.kind == NormKind::holder,
          "check_pull_weight: needs a Besov-family norm");
  Field w = weight_field(f.grid, spec.mu);
  Field fw = f;
  for (size_t i = 0; i < fw.v.size(); ++i) fw.v[i] *= w.v[i].real();
  NormSpec unweighted = spec;
  unweighted.mu = 0.0;
  return norm(sp, lp, f, spec) / norm(sp, lp, fw, unweighted);
}

CommutatorReport check_commutator(Spectral& sp, const LPDecomp& lp, const Field& f,
                                  double delta, double p) {
  require(delta > 0.0 && delta < 1.0, "check_commutator: delta must lie in (0,1)");
  const GridSpec& g = lp.grid();
  Field w = weight_field(g, delta);
  Field ones = weight_field(g, 0.0);
  double nf = weighted_lp(f, ones, p);
  require(nf > 0.0, "check_commutator: zero field");

  Field wf = f;
  for (size_t i = 0; i < wf.v.size(); ++i) wf.v[i] *= w.v[i].real();
  Field fh = sp.forward(f);
  Field wfh = sp.forward(wf);

  CommutatorReport rep;
  Field t1(g, Tag::spectral), t2(g, Tag::spectral);
  for (size_t lev = 0; lev < lp.levels().size(); ++lev) {
    const auto& s = lp.symbols()[lev];
    for (size_t i = 0; i < fh.v.size(); ++i) {
      t1.v[i] = wfh.v[i] * s[i];
      t2.v[i] = fh.v[i] * s[i];
    }
    Field b1 = sp.inverse(t1);
    Field b2 = sp.inverse(t2);
    for (size_t i = 0; i < b1.v.size(); ++i) b1.v[i] -= w.v[i].real() * b2.v[i];
    double cn = lp.levels()[lev] * weighted_lp(b1, ones, p) / nf;
    rep.levels.push_back(lp.levels()[lev]);
    rep.c_n.push_back(cn);
    rep.sup = std::max(rep.sup, cn);
  }
  return rep;
}

Field corpus_field(Spectral& sp, uint64_t master, uint32_t member) {
  const GridSpec& g = sp.grid();
  // fixed physical band: identical fields at every n >= 64 on the same box
  double kcut = 0.25 * M_PI * 64.0 / g.L;
  double two_sig2 = 2.0 * (kcut / 3.0) * (kcut / 3.0);
  CounterRng rng(master, member, purpose::corpus);

  Field fh(g, Tag::spectral);
  for (int a1 = 0; a1 < g.n; ++a1) {
    double kx = g.kfreq(a1);
    for (int a2 = 0; a2 < g.n; ++a2) {
      double ky = g.kfreq(a2);
      double k2 = kx * kx + ky * ky;
      if (std::sqrt(k2) > kcut) continue;
      auto [re, im] = rng.normal_pair(static_cast<uint32_t>(g.mode(a1)),
                                      static_cast<uint32_t>(g.mode(a2)));
      fh.at(a1, a2) = cd(re, im) * std::exp(-k2 / two_sig2);
    }
  }
  Field f = sp.inverse(fh);
  for (auto& z : f.v) z = z.real();
  double nf = l2_norm(f);
  for (auto& z : f.v) z /= nf;
  return f;
}

Field gauss_bump(const GridSpec& g, double sigma, double x0, double y0) {
  Field f(g, Tag::physical);
  for (int j1 = 0; j1 < g.n; ++j1) {
    double x = g.coord(j1);
    for (int j2 = 0; j2 < g.n; ++j2) {
      double y = g.coord(j2);
      double s = 0.0;
      for (int mx = -1; mx <= 1; ++mx)
        for (int my = -1; my <= 1; ++my) {
          double dx = x - x0 + mx * g.L, dy = y - y0 + my * g.L;
          s += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        }
      f.at(j1, j2) = s;
    }
  }
  return f;
}

}  // namespace wicknls
