#pragma once
#include <array>
#include <functional>

// Smooth profiles and scalar quadrature shared by the mollifier, the
// truncated log-kernel cutoff and the Littlewood-Paley symbols, plus a
// double-precision Bessel J0 for the radial Fourier tables.  Everything here
// is deterministic and mirrors one fixed choice of C^inf bump,
// exp(-1/(1-t^2)), so that symbol tables are reproducible bit-for-bit.

namespace wicknls {

// exp(-1/(1-t^2)) on |t|<1, 0 outside; not normalized.
double bump(double t);

// 64-point Gauss-Legendre on [a,b]; exact for polynomials through degree 127,
// ~1e-15 for the analytic integrands used here.
double gl64(const std::function<double(double)>& f, double a, double b);

// Raw GL-64 nodes/weights on [-1,1], for composite rules that batch their own
// panel arithmetic instead of going through the std::function wrapper.
const std::array<double, 64>& gl64_nodes();
const std::array<double, 64>& gl64_weights();

// C^inf monotone 1 -> 0 on [0,1]: S(u) = int_u^1 b(2s-1) ds / int_0^1 b(2s-1) ds.
double smoothstep_down(double u);

// Radial cutoff for the truncated log kernel: 1 on [0,1/4], 0 on [1/2,inf).
double chi_cutoff(double r);

// Normalized 2D mollifier profile rho(r) = Z exp(-1/(1-r^2)), integral over
// the plane = 1; rho_norm_z() exposes Z for tests.
double rho_profile(double r);
double rho_norm_z();

// Truncated 2D log kernel G(r) = (1/2pi) ln(r) chi(r):  Delta G = delta_0 + phi
// with phi smooth, so Y = G * xi solves Delta Y = xi + phi * xi.
double green_radial(double r);

// Littlewood-Paley low-pass profile: 1 on [0,1/2], 0 on [1,inf).
double lp_psi(double t);

// Bessel J0, |error| < 1e-11 on [0, ~1e4]: power series below x = 12,
// Hankel asymptotic (A&S 9.2.5/9.2.10 with mu = 0) above.
double bessel_j0(double x);

}  // namespace wicknls
