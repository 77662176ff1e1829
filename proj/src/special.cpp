#include "wicknls/special.hpp"

#include <array>
#include <cmath>

namespace wicknls {

namespace {

// Gauss-Legendre nodes/weights on [-1,1], generated once by Newton iteration
// on P_64 (symmetric; converges in < 10 steps from the Chebyshev guess).
struct Gl64Table {
  std::array<double, 64> x{}, w{};
  Gl64Table() {
    constexpr int n = 64;
    for (int i = 0; i < n / 2; ++i) {
      double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        // recurrence for P_n(xi) and P'_n(xi)
        double p0 = 1.0, p1 = xi;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = n * (xi * p1 - p0) / (xi * xi - 1.0);
        double dx = p1 / pp;
        xi -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      x[i] = -xi;
      x[n - 1 - i] = xi;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * pp * pp);
    }
  }
};

const Gl64Table& gl_table() {
  static const Gl64Table t;
  return t;
}

double bump_shifted(double s) { return bump(2.0 * s - 1.0); }

}  // namespace

double bump(double t) {
  double a = std::abs(t);
  if (a >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

double gl64(const std::function<double(double)>& f, double a, double b) {
  const auto& t = gl_table();
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 64; ++i) s += t.w[i] * f(mid + half * t.x[i]);
  return half * s;
}

const std::array<double, 64>& gl64_nodes() { return gl_table().x; }
const std::array<double, 64>& gl64_weights() { return gl_table().w; }

double smoothstep_down(double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  static const double den = gl64(bump_shifted, 0.0, 1.0);
  return gl64(bump_shifted, u, 1.0) / den;
}

double chi_cutoff(double r) { return smoothstep_down((r - 0.25) * 4.0); }

double rho_norm_z() {
  static const double z =
      1.0 / (2.0 * M_PI * gl64([](double r) { return bump(r) * r; }, 0.0, 1.0));
  return z;
}

double rho_profile(double r) { return rho_norm_z() * bump(r); }

double green_radial(double r) {
  if (r <= 0.0 || r >= 0.5) return 0.0;
  return (0.5 / M_PI) * std::log(r) * chi_cutoff(r);
}

double lp_psi(double t) { return smoothstep_down((t - 0.5) * 2.0); }

double bessel_j0(double x) {
  x = std::abs(x);
  if (x < 12.0) {
    // sum (-z)^k / (k!)^2, z = x^2/4; worst cancellation ~4e-13 near x = 12
    double z = 0.25 * x * x, term = 1.0, s = 1.0;
    for (int k = 1; k <= 80; ++k) {
      term *= -z / double(k) / double(k);
      s += term;
      if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(s))) break;
    }
    return s;
  }
  // Hankel expansion, signed terms t_m = t_{m-1} (mu - (2m-1)^2)/(m 8x), mu=0:
  //   P = t0 - t2 + t4 - ...,  Q = t1 - t3 + t5 - ...
  // truncated at the smallest term (error ~e^{-2x} < 4e-11 for x >= 12).
  double ax = 8.0 * x, t = 1.0, P = 1.0, Q = 0.0;
  double sgn_p = -1.0, sgn_q = 1.0, prev = HUGE_VAL;
  for (int m = 1; m < 40; ++m) {
    t *= (0.0 - double(2 * m - 1) * double(2 * m - 1)) / (m * ax);
    if (std::abs(t) > prev) break;
    if (m % 2 == 1) {
      Q += sgn_q * t;
      sgn_q = -sgn_q;
    } else {
      P += sgn_p * t;
      sgn_p = -sgn_p;
    }
    prev = std::abs(t);
  }
  double c = x - 0.25 * M_PI;
  return std::sqrt(2.0 / (M_PI * x)) * (P * std::cos(c) - Q * std::sin(c));
}

}  // namespace wicknls
