#include "wicknls/radial_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wicknls/special.hpp"

namespace wicknls {

std::vector<double> radial_ft(const std::function<double(double)>& f, double rmax,
                              const std::vector<double>& kappas, bool dyadic_to_zero) {
  double kmax = 0.0;
  for (double k : kappas) kmax = std::max(kmax, k);

  // ~19 panels per J0 period at the largest kappa; the +40 floor keeps the
  // rule saturated for small arguments too.
  int npan = std::max(40, static_cast<int>(std::ceil(kmax * rmax / 3.0)) + 40);
  std::vector<double> edges;
  edges.reserve(static_cast<size_t>(npan) + 46);
  double first = rmax / npan;
  if (dyadic_to_zero) {
    edges.push_back(0.0);
    for (int j = 44; j >= 1; --j) edges.push_back(first * std::ldexp(1.0, -j));
  } else {
    edges.push_back(0.0);
  }
  for (int i = 1; i <= npan; ++i) edges.push_back(rmax * i / npan);

  // flatten all panel nodes/weights once; each table entry is then a plain
  // weighted J0 sum over the same node set
  const auto& gx = gl64_nodes();
  const auto& gw = gl64_weights();
  size_t nn = (edges.size() - 1) * 64;
  std::vector<double> rs(nn), fw(nn);
  size_t idx = 0;
  for (size_t p = 0; p + 1 < edges.size(); ++p) {
    double a = edges[p], b = edges[p + 1];
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < 64; ++i, ++idx) {
      double r = mid + half * gx[i];
      rs[idx] = r;
      fw[idx] = half * gw[i] * f(r) * r;
    }
  }

  std::vector<double> out(kappas.size());
  for (size_t q = 0; q < kappas.size(); ++q) {
    double kap = kappas[q], s = 0.0;
    for (size_t i = 0; i < nn; ++i) s += fw[i] * bessel_j0(kap * rs[i]);
    out[q] = 2.0 * M_PI * s;
  }
  return out;
}

RadialTable::RadialTable(const std::function<double(double)>& f, double rmax, double kmax,
                         bool dyadic_to_zero)
    : kmax_(kmax) {
  if (!(rmax > 0.0) || !(kmax > 0.0)) throw std::logic_error("RadialTable: bad rmax/kmax");
  size_t nk = std::max<size_t>(8192, static_cast<size_t>(32.0 * kmax));
  std::vector<double> kg(nk);
  dk_ = kmax / static_cast<double>(nk - 1);
  for (size_t i = 0; i < nk; ++i) kg[i] = dk_ * static_cast<double>(i);
  vals_ = radial_ft(f, rmax, kg, dyadic_to_zero);
}

double RadialTable::operator()(double kappa) const {
  if (!(kappa >= 0.0) || kappa > kmax_ * (1.0 + 1e-12))
    throw std::logic_error("RadialTable: lookup outside tabulated range");
  double t = std::min(kappa / dk_, static_cast<double>(vals_.size() - 1));
  size_t i = std::min(static_cast<size_t>(t), vals_.size() - 2);
  double frac = t - static_cast<double>(i);
  return vals_[i] + frac * (vals_[i + 1] - vals_[i]);
}

}  // namespace wicknls
