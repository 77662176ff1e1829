#pragma once
#include <functional>
#include <vector>

// Dense tables of radial Fourier symbols.  The 2D analyst transform of a
// radial profile f supported in [0, rmax] is
//   fhat(kappa) = 2 pi int_0^rmax f(r) J0(kappa r) r dr,
// evaluated by composite 64-point Gauss-Legendre with enough panels to
// resolve the J0 oscillation at the largest kappa requested.  Profiles with
// an integrable singularity at r = 0 (the truncated log kernel) get a dyadic
// panel refinement toward the origin.

namespace wicknls {

// fhat at each kappa in `kappas`; the panel count is sized for max(kappas)
// so the whole table shares one quadrature rule.
std::vector<double> radial_ft(const std::function<double(double)>& f, double rmax,
                              const std::vector<double>& kappas, bool dyadic_to_zero = false);

class RadialTable {
 public:
  // Tabulate fhat on [0, kmax] with nk = max(8192, 32 kmax) nodes; linear
  // interpolation between nodes (spacing is far below the symbol's
  // oscillation scale 2 pi / rmax).
  RadialTable(const std::function<double(double)>& f, double rmax, double kmax,
              bool dyadic_to_zero = false);

  // Linear interpolation; out-of-range kappa is a caller bug, not clamped.
  double operator()(double kappa) const;

  double kmax() const { return kmax_; }

 private:
  double kmax_ = 0.0;
  double dk_ = 0.0;
  std::vector<double> vals_;
};

}  // namespace wicknls
