#include "wicknls/noise.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "wicknls/parallel.hpp"
#include "wicknls/rng.hpp"
#include "wicknls/special.hpp"

namespace wicknls {

namespace {

// mean of log|x| over the unit-half-width square [-1,1]^2
constexpr double kLogCellAvg = -0.368028246322579;  // (ln 2 - 3 + pi/2) / 2

void take_real(Field& f) {
  for (auto& z : f.v) z = z.real();
}

double wrapped_r(const GridSpec& g, int j1, int j2) {
  double x = std::abs(g.coord(j1)), y = std::abs(g.coord(j2));
  x = std::min(x, g.L - x);
  y = std::min(y, g.L - y);
  return std::hypot(x, y);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  double mu = mean_of(v), s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

NoiseOps::NoiseOps(double kmax)
    : rho_tab_([](double r) { return rho_profile(r); }, 1.0, kmax, false),
      green_tab_([](double r) { return green_radial(r); }, 0.5, kmax, true) {}

const NoiseOps& NoiseOps::for_grid(const GridSpec& g) {
  // 1% headroom over the lattice corner mode; +1 so eps-scaled lookups near
  // the corner stay inside the table
  double kmax = g.kmax_lattice() * 1.01 + 1.0;
  static std::mutex mu;
  static std::map<double, std::unique_ptr<NoiseOps>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(kmax);
  if (it == cache.end())
    it = cache.emplace(kmax, std::unique_ptr<NoiseOps>(new NoiseOps(kmax))).first;
  return *it->second;
}

Field sample_white_noise_hat(const GridSpec& g, uint64_t seed, uint32_t stream) {
  CounterRng rng(seed, stream, purpose::noise_modes);
  Field xih(g, Tag::spectral);
  const int n = g.n;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int a1 = 0; a1 < n; ++a1) {
    int m1 = g.mode(a1);
    for (int a2 = 0; a2 < n; ++a2) {
      int m2 = g.mode(a2);
      int pa1 = (n - a1) % n, pa2 = (n - a2) % n;
      auto key = [](int m) { return static_cast<uint32_t>(static_cast<int32_t>(m)); };
      if (pa1 == a1 && pa2 == a2) {
        // self-conjugate mode (DC / Nyquist corners): real N(0,1)
        xih.at(a1, a2) = rng.normal_pair(key(m1), key(m2)).first;
        continue;
      }
      // Canonical member of the (k, -k) pair by storage order; for interior
      // modes this is exactly the signed-mode order ((m1>0) or (m1==0 and
      // m2>0)), so canonicality — like the draw key — does not depend on n.
      bool canonical = (a1 < pa1) || (a1 == pa1 && a2 < pa2);
      if (canonical) {
        auto [re, im] = rng.normal_pair(key(m1), key(m2));
        xih.at(a1, a2) = cd(re, im) * inv_sqrt2;
      } else {
        auto [re, im] = rng.normal_pair(key(g.mode(pa1)), key(g.mode(pa2)));
        xih.at(a1, a2) = cd(re, -im) * inv_sqrt2;
      }
    }
  }
  return xih;
}

Field sample_white_noise(Spectral& sp, uint64_t seed, uint32_t stream) {
  Field xi = sp.inverse(sample_white_noise_hat(sp.grid(), seed, stream));
  take_real(xi);
  return xi;
}

Field truncated_green(const GridSpec& g) {
  if (g.L <= 2.0)
    throw ConfigError("truncated_green: box too small (L <= 2), kernel support would wrap");
  require(g.h() <= 0.35, "truncated_green: grid too coarse for the origin-cell average");
  Field G(g, Tag::physical);
  for (int j1 = 0; j1 < g.n; ++j1)
    for (int j2 = 0; j2 < g.n; ++j2) {
      double r = wrapped_r(g, j1, j2);
      G.at(j1, j2) = green_radial(r);
    }
  // origin cell: average of (1/2pi) ln|x| over the h-square (chi == 1 there)
  G.at(0, 0) = (0.5 / M_PI) * (std::log(0.5 * g.h()) + kLogCellAvg);
  return G;
}

double compute_c_eps(const GridSpec& g, double eps, double amplitude) {
  require(eps > 0.0, "c_eps: eps must be positive");
  const NoiseOps& ops = NoiseOps::for_grid(g);
  double s = 0.0;
  for (int a1 = 0; a1 < g.n; ++a1) {
    double kx = g.kfreq(a1);
    for (int a2 = 0; a2 < g.n; ++a2) {
      double ky = g.kfreq(a2);
      double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      double kabs = std::sqrt(k2);
      double gh = ops.green_hat(kabs);
      double rh = ops.rho_hat(eps * kabs);
      s += k2 * gh * gh * rh * rh;
    }
  }
  return amplitude * amplitude * s / (g.L * g.L);
}

namespace {

NoiseBundle bundle_from_hat(Spectral& sp, Field xih, uint64_t seed, uint32_t stream,
                            double eps, double amplitude, bool allow_coarse) {
  const GridSpec& g = sp.grid();
  require(eps > 0.0, "build_bundle: eps must be positive");
  require(allow_coarse || eps >= 4.0 * g.h(),
          "build_bundle: eps < 4h leaves the mollifier unresolved "
          "(resolution.allow_coarse overrides)");
  const NoiseOps& ops = NoiseOps::for_grid(g);

  NoiseBundle b;
  b.seed = seed;
  b.stream = stream;
  b.eps = eps;
  b.amplitude = amplitude;
  b.c_eps = compute_c_eps(g, eps, amplitude);

  if (amplitude != 1.0)
    for (auto& z : xih.v) z *= amplitude;

  Field xieh(g, Tag::spectral), yh(g, Tag::spectral), yeh(g, Tag::spectral),
      lapyeh(g, Tag::spectral);
  b.green_hat = Field(g, Tag::spectral);
  for (int a1 = 0; a1 < g.n; ++a1) {
    double kx = g.kfreq(a1);
    for (int a2 = 0; a2 < g.n; ++a2) {
      double ky = g.kfreq(a2);
      double k2 = kx * kx + ky * ky;
      double kabs = std::sqrt(k2);
      double gh = ops.green_hat(kabs);
      double rh = ops.rho_hat(eps * kabs);
      cd x = xih.at(a1, a2);
      b.green_hat.at(a1, a2) = gh;
      xieh.at(a1, a2) = rh * x;
      yh.at(a1, a2) = gh * x;
      yeh.at(a1, a2) = gh * rh * x;
      lapyeh.at(a1, a2) = -k2 * gh * rh * x;
    }
  }

  b.xi = sp.inverse(xih);
  b.xi_eps = sp.inverse(xieh);
  b.Y = sp.inverse(yh);
  b.Y_eps = sp.inverse(yeh);
  auto [gx, gy] = sp.gradient(yeh);
  b.grad_Y_eps_x = sp.inverse(gx);
  b.grad_Y_eps_y = sp.inverse(gy);
  Field lapY = sp.inverse(lapyeh);
  for (Field* f : {&b.xi, &b.xi_eps, &b.Y, &b.Y_eps, &b.grad_Y_eps_x, &b.grad_Y_eps_y, &lapY})
    take_real(*f);

  b.wick = Field(g, Tag::physical);
  b.v_tilde = Field(g, Tag::physical);
  for (size_t i = 0; i < b.wick.v.size(); ++i) {
    double g2 = b.grad_Y_eps_x.v[i].real() * b.grad_Y_eps_x.v[i].real() +
                b.grad_Y_eps_y.v[i].real() * b.grad_Y_eps_y.v[i].real();
    double wick = g2 - b.c_eps;
    b.wick.v[i] = wick;
    b.v_tilde.v[i] = wick - (lapY.v[i].real() - b.xi_eps.v[i].real());
  }
  return b;
}

}  // namespace

NoiseBundle build_bundle(Spectral& sp, uint64_t seed, uint32_t stream, double eps,
                         double amplitude, bool allow_coarse) {
  return bundle_from_hat(sp, sample_white_noise_hat(sp.grid(), seed, stream), seed, stream,
                         eps, amplitude, allow_coarse);
}

NoiseBundle build_bundle_from_xi(Spectral& sp, const Field& xi, double eps, double amplitude,
                                 bool allow_coarse) {
  require(xi.grid == sp.grid() && xi.tag == Tag::physical,
          "build_bundle_from_xi: physical field on the engine's grid");
  return bundle_from_hat(sp, sp.forward(xi), 0, 0, eps, amplitude, allow_coarse);
}

NoiseBundle refine_bundle(Spectral& sp_coarse, Spectral& sp_fine, const NoiseBundle& b) {
  const GridSpec& gc = sp_coarse.grid();
  const GridSpec& gf = sp_fine.grid();
  require(b.Y_eps.grid == gc, "refine_bundle: bundle lives on a different grid");
  require(gf.L == gc.L && gf.n >= gc.n, "refine_bundle: target must refine the same box");

  NoiseBundle r;
  r.seed = b.seed;
  r.stream = b.stream;
  r.eps = b.eps;
  r.amplitude = b.amplitude;
  r.c_eps = b.c_eps;

  Field xih = embed_spectral(sp_coarse.forward(b.xi), gf);
  Field xieh = embed_spectral(sp_coarse.forward(b.xi_eps), gf);
  Field yh = embed_spectral(sp_coarse.forward(b.Y), gf);
  Field yeh = embed_spectral(sp_coarse.forward(b.Y_eps), gf);

  r.xi = sp_fine.inverse(xih);
  r.xi_eps = sp_fine.inverse(xieh);
  r.Y = sp_fine.inverse(yh);
  r.Y_eps = sp_fine.inverse(yeh);
  auto [gx, gy] = sp_fine.gradient(yeh);
  r.grad_Y_eps_x = sp_fine.inverse(gx);
  r.grad_Y_eps_y = sp_fine.inverse(gy);
  Field lapY = sp_fine.inverse(sp_fine.laplacian(yeh));
  for (Field* f : {&r.xi, &r.xi_eps, &r.Y, &r.Y_eps, &r.grad_Y_eps_x, &r.grad_Y_eps_y, &lapY})
    take_real(*f);

  r.wick = Field(gf, Tag::physical);
  r.v_tilde = Field(gf, Tag::physical);
  for (size_t i = 0; i < r.wick.v.size(); ++i) {
    double g2 = r.grad_Y_eps_x.v[i].real() * r.grad_Y_eps_x.v[i].real() +
                r.grad_Y_eps_y.v[i].real() * r.grad_Y_eps_y.v[i].real();
    double wick = g2 - r.c_eps;
    r.wick.v[i] = wick;
    r.v_tilde.v[i] = wick - (lapY.v[i].real() - r.xi_eps.v[i].real());
  }
  return r;
}

StochasticBoundsReport verify_stochastic_bounds(const GridSpec& g,
                                                const std::vector<double>& eps_list, int M,
                                                uint64_t seed,
                                                const StochasticBoundsParams& prm) {
  require(M >= 20, "stochastic bounds: fewer than 20 realizations refused");
  require(eps_list.size() >= 2, "stochastic bounds: need at least two eps levels");
  for (size_t i = 0; i + 1 < eps_list.size(); ++i)
    require(eps_list[i] > eps_list[i + 1] && eps_list[i + 1] > 0.0,
            "stochastic bounds: eps ladder must be positive and decreasing");
  for (double e : eps_list)
    require(prm.allow_coarse || e >= 4.0 * g.h(),
            "stochastic bounds: eps < 4h (resolution.allow_coarse overrides)");

  const NoiseOps& ops = NoiseOps::for_grid(g);  // build tables before the pool starts
  const LPDecomp lp(g);
  const Field wneg = weight_field(g, -prm.delta);
  const NormSpec holder_y = holder_norm(prm.alpha, -prm.delta);
  const NormSpec holder_wick = holder_norm(prm.alpha - 1.0, -prm.delta);

  const int nlev = static_cast<int>(eps_list.size());
  const int npair = nlev - 1;

  // shared read-only symbol rows
  std::vector<double> green_row(static_cast<size_t>(g.size()));
  std::vector<std::vector<double>> rho_rows(static_cast<size_t>(nlev));
  std::vector<double> c_eps(static_cast<size_t>(nlev));
  for (int lev = 0; lev < nlev; ++lev) {
    rho_rows[lev].resize(static_cast<size_t>(g.size()));
    c_eps[lev] = compute_c_eps(g, eps_list[lev], prm.amplitude);
  }
  for (int a1 = 0; a1 < g.n; ++a1) {
    double kx = g.kfreq(a1);
    for (int a2 = 0; a2 < g.n; ++a2) {
      double ky = g.kfreq(a2);
      double kabs = std::hypot(kx, ky);
      size_t i = static_cast<size_t>(a1) * g.n + a2;
      green_row[i] = ops.green_hat(kabs);
      for (int lev = 0; lev < nlev; ++lev)
        rho_rows[lev][i] = ops.rho_hat(eps_list[lev] * kabs);
    }
  }

  int workers = prm.workers <= 0 ? default_workers() : prm.workers;
  workers = std::min(workers, M);
  std::vector<std::unique_ptr<Spectral>> engines;
  for (int wkr = 0; wkr < workers; ++wkr) engines.emplace_back(new Spectral(g));

  // task-indexed result slots (deterministic merge)
  auto matrix = [&](int cols) {
    return std::vector<std::vector<double>>(static_cast<size_t>(M),
                                            std::vector<double>(static_cast<size_t>(cols)));
  };
  auto l4sq = matrix(nlev), wick_mean = matrix(nlev), grad_msq = matrix(nlev),
       expn = matrix(nlev), wgap = matrix(npair), ygap = matrix(npair);

  parallel_for(M, workers, [&](int m, int wkr) {
    Spectral& sp = *engines[wkr];
    Field xih = prm.injected_xi ? sp.forward(*prm.injected_xi)
                                : sample_white_noise_hat(g, seed, static_cast<uint32_t>(m));
    if (prm.amplitude != 1.0)
      for (auto& z : xih.v) z *= prm.amplitude;

    std::vector<Field> Ys, wicks;
    Field yh(g, Tag::spectral);
    for (int lev = 0; lev < nlev; ++lev) {
      for (size_t i = 0; i < yh.v.size(); ++i)
        yh.v[i] = green_row[i] * rho_rows[lev][i] * xih.v[i];
      auto [gxh, gyh] = sp.gradient(yh);
      Field gx = sp.inverse(gxh), gy = sp.inverse(gyh);
      Field Y = sp.inverse(yh);
      take_real(Y);

      Field gmag(g, Tag::physical), expY(g, Tag::physical);
      double msum = 0.0;
      for (size_t i = 0; i < gmag.v.size(); ++i) {
        double g2 = gx.v[i].real() * gx.v[i].real() + gy.v[i].real() * gy.v[i].real();
        gmag.v[i] = std::sqrt(g2);
        msum += g2;
        expY.v[i] = std::exp(prm.a * Y.v[i].real());
      }
      double msq = msum / g.size();
      double l4 = weighted_lp(gmag, wneg, prm.r);
      l4sq[m][lev] = l4 * l4;
      grad_msq[m][lev] = msq;
      wick_mean[m][lev] = msq - c_eps[lev];
      expn[m][lev] = norm(sp, lp, expY, holder_y);

      Field wick(g, Tag::physical);
      for (size_t i = 0; i < wick.v.size(); ++i) {
        double g2 = gx.v[i].real() * gx.v[i].real() + gy.v[i].real() * gy.v[i].real();
        wick.v[i] = g2 - c_eps[lev];
      }
      Ys.push_back(std::move(Y));
      wicks.push_back(std::move(wick));
    }
    for (int j = 0; j < npair; ++j) {
      Field dw(g, Tag::physical), dy(g, Tag::physical);
      for (size_t i = 0; i < dw.v.size(); ++i) {
        dw.v[i] = wicks[j].v[i] - wicks[j + 1].v[i];
        dy.v[i] = Ys[j].v[i] - Ys[j + 1].v[i];
      }
      wgap[m][j] = norm(sp, lp, dw, holder_wick);
      ygap[m][j] = norm(sp, lp, dy, holder_y);
    }
  });

  StochasticBoundsReport rep;
  rep.grid = g;
  rep.seed = seed;
  rep.M = M;
  rep.params = prm;
  rep.eps = eps_list;
  rep.c_eps = c_eps;

  auto column = [&](const std::vector<std::vector<double>>& mat, int c) {
    std::vector<double> col(static_cast<size_t>(M));
    for (int m = 0; m < M; ++m) col[static_cast<size_t>(m)] = mat[static_cast<size_t>(m)][static_cast<size_t>(c)];
    return col;
  };

  for (int lev = 0; lev < nlev; ++lev) {
    double lnE = std::abs(std::log(eps_list[lev]));
    auto l4col = column(l4sq, lev);
    rep.grad_ratio.push_back(mean_of(l4col) / lnE);

    auto wc = column(wick_mean, lev);
    double se_w = sd_of(wc) / std::sqrt(static_cast<double>(M));
    rep.wick_center_t.push_back(se_w > 0.0 ? std::abs(mean_of(wc)) / se_w : 0.0);

    auto gm = column(grad_msq, lev);
    double se_g = sd_of(gm) / std::sqrt(static_cast<double>(M));
    rep.c_eps_mc_t.push_back(se_g > 0.0 ? std::abs(mean_of(gm) - c_eps[lev]) / se_g : 0.0);

    rep.exp_norm_median.push_back(median_of(column(expn, lev)));
  }
  double rmin = *std::min_element(rep.grad_ratio.begin(), rep.grad_ratio.end());
  double rmax = *std::max_element(rep.grad_ratio.begin(), rep.grad_ratio.end());
  rep.grad_ratio_spread = (rmax - rmin) / rmin;
  double emin = *std::min_element(rep.exp_norm_median.begin(), rep.exp_norm_median.end());
  double emax = *std::max_element(rep.exp_norm_median.begin(), rep.exp_norm_median.end());
  rep.exp_stability = emax / emin;

  for (int j = 0; j < npair; ++j) {
    rep.wick_gap_median.push_back(median_of(column(wgap, j)));
    rep.y_gap_median.push_back(median_of(column(ygap, j)));
  }
  rep.wick_gap_decreasing = true;
  rep.y_gap_decreasing = true;
  for (int j = 0; j + 1 < npair; ++j) {
    if (rep.wick_gap_median[j] <= rep.wick_gap_median[j + 1]) rep.wick_gap_decreasing = false;
    if (rep.y_gap_median[j] <= rep.y_gap_median[j + 1]) rep.y_gap_decreasing = false;
  }
  int mono = 0;
  for (int m = 0; m < M; ++m) {
    bool ok = true;
    for (int j = 0; j + 1 < npair; ++j)
      if (wgap[m][j] <= wgap[m][j + 1]) ok = false;
    mono += ok ? 1 : 0;
  }
  rep.monotone_fraction = static_cast<double>(mono) / M;
  return rep;
}

}  // namespace wicknls
