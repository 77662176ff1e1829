#pragma once
#include <cstdint>
#include <vector>

#include "wicknls/grid.hpp"
#include "wicknls/lp.hpp"
#include "wicknls/radial_table.hpp"

// One realization of the stochastic objects: white noise xi, its
// mollification xi_eps = rho_eps * xi, the log-kernel potentials
// Y = G * xi and Y_eps = rho_eps * Y, the renormalization constant
// c_eps = E|grad Y_eps|^2, the Wick square |grad Y_eps|^2 - c_eps, and the
// corrected potential v_tilde = wick - (lap Y_eps - xi_eps).
//
// Sign convention: G(x) = +(1/2pi) log|x| chi(|x|), so that
// Delta G = +delta_0 + phi with phi smooth and supported in the cutoff
// annulus; Delta Y_eps - xi_eps is then the smooth remainder phi * xi_eps.

namespace wicknls {

// Shared radial symbol tables, built once per distinct lattice range and
// cached process-wide (lookups are read-only and thread-safe).
class NoiseOps {
 public:
  static const NoiseOps& for_grid(const GridSpec& g);

  // Mollifier symbol rhohat(kappa); rhohat(0) = 1 by normalization.  Beyond
  // the tabulated range (reachable only when eps > 1, since the table covers
  // the full lattice with headroom) the symbol is below the table's own
  // interpolation error and is returned as 0 rather than clamped — a
  // constant extension once inflated every k^2-weighted sum over the outer
  // modes, which is the failure mode the range discipline exists to stop.
  double rho_hat(double kappa) const {
    return kappa > rho_tab_.kmax() ? 0.0 : rho_tab_(kappa);
  }

  // Truncated log-kernel symbol Ghat(kappa); lattice arguments are always
  // inside the tabulated range (asserted in the table lookup).
  double green_hat(double kappa) const { return green_tab_(kappa); }

  double kmax() const { return green_tab_.kmax(); }

 private:
  explicit NoiseOps(double kmax);
  RadialTable rho_tab_;
  RadialTable green_tab_;
};

struct NoiseBundle {
  uint64_t seed = 0;
  uint32_t stream = 0;
  double eps = 0.0;
  double amplitude = 1.0;
  double c_eps = 0.0;
  Field xi;                          // white noise, real values
  Field xi_eps;                      // rho_eps * xi
  Field Y;                           // G * xi
  Field Y_eps;                       // rho_eps * Y
  Field grad_Y_eps_x, grad_Y_eps_y;  // spectral gradient of Y_eps
  Field wick;                        // |grad Y_eps|^2 - c_eps
  Field v_tilde;                     // wick - (lap Y_eps - xi_eps)
  Field green_hat;                   // spectral field of Ghat(|k|)
};

// Spectral white-noise draw: Hermitian mode-indexed coefficients with
// E|xihat(k)|^2 = 1, equivalent in law to xi_{jk} = g_{jk}/h with iid
// standard normals.  Because draws are keyed by signed mode, the interior
// modes of an n-grid and a 2n-grid receive identical coefficients — the
// pathwise coupling the refinement checks rely on.
Field sample_white_noise_hat(const GridSpec& g, uint64_t seed, uint32_t stream = 0);

// Physical-space realization (real-valued) of the draw above.
Field sample_white_noise(Spectral& sp, uint64_t seed, uint32_t stream = 0);

// Physical-space truncated kernel on the lattice; the origin cell carries
// the analytic cell average of the log.  Requires L > 2 (support must not
// wrap) and h small enough that the origin cell sits inside chi == 1.
Field truncated_green(const GridSpec& g);

// Deterministic Plancherel sum  c_eps = (a^2/L^2) sum_k |k|^2 rhohat(eps|k|)^2 Ghat(|k|)^2.
// Pure lattice quantity: not subject to the eps >= 4h resolution rule.
double compute_c_eps(const GridSpec& g, double eps, double amplitude = 1.0);

// Field construction enforces eps > 0 and the resolution rule eps >= 4h
// (overridable: allow_coarse).  Pure function of (seed, stream, eps).
NoiseBundle build_bundle(Spectral& sp, uint64_t seed, uint32_t stream, double eps,
                         double amplitude = 1.0, bool allow_coarse = false);

// Injection point for deterministic tests: same construction from a given
// physical-space xi realization.
NoiseBundle build_bundle_from_xi(Spectral& sp, const Field& xi, double eps,
                                 double amplitude = 1.0, bool allow_coarse = false);

// Re-evaluate a bundle on a finer grid of the same box: embed xi-hat and
// Y_eps-hat band-limitedly, then recompute gradient, Laplacian, Wick square,
// and v_tilde natively there.  The pointwise square of the embedded gradient
// is exactly representable on a 2x grid, which removes the aliasing baked
// into the coarse wick/v_tilde — the property energy audits rely on.  c_eps
// stays the coarse lattice constant; green_hat is left empty (this is an
// evaluation bundle, not a sampling bundle).
NoiseBundle refine_bundle(Spectral& sp_coarse, Spectral& sp_fine, const NoiseBundle& b);

struct StochasticBoundsParams {
  double r = 4.0;       // integrability of the gradient moment
  double delta = 0.75;  // weight decay exponent (weights are <x>^{-delta})
  double alpha = 0.5;   // Holder regularity for Y and e^{aY}; Wick gaps use alpha-1
  double a = 1.0;       // exponent in e^{aY}
  double amplitude = 1.0;
  bool allow_coarse = false;
  int workers = 0;                    // 0 -> default_workers()
  const Field* injected_xi = nullptr; // realization-level injection (tests)
};

struct StochasticBoundsReport {
  GridSpec grid;
  uint64_t seed = 0;
  int M = 0;
  StochasticBoundsParams params;
  std::vector<double> eps;     // ladder, decreasing
  std::vector<double> c_eps;
  // (a) E ||grad Y_eps||^2_{L^r_{-delta}} / |ln eps| per level, and its spread
  std::vector<double> grad_ratio;
  double grad_ratio_spread = 0.0;  // (max - min) / min
  // (b) median || wick_j - wick_{j+1} ||_{C^{alpha-1}_{-delta}} per adjacent pair
  std::vector<double> wick_gap_median;
  bool wick_gap_decreasing = false;
  double monotone_fraction = 0.0;  // draws whose own gap chain decreases
  // (c) median || e^{a Y_eps} ||_{C^alpha_{-delta}} per level, max/min across ladder
  std::vector<double> exp_norm_median;
  double exp_stability = 0.0;
  // (d) median || Y_j - Y_{j+1} ||_{C^alpha_{-delta}} per adjacent pair
  std::vector<double> y_gap_median;
  bool y_gap_decreasing = false;
  // report invariants: |t|-statistics per level
  std::vector<double> wick_center_t;  // MC+spatial mean of wick vs 0
  std::vector<double> c_eps_mc_t;     // MC spatial mean of |grad Y|^2 vs lattice c_eps
};

// Monte Carlo verification of the eps-uniform noise bounds on a coupled
// ladder (one xi per draw, shared across eps levels).  M < 20 is refused.
StochasticBoundsReport verify_stochastic_bounds(const GridSpec& g,
                                                const std::vector<double>& eps_list, int M,
                                                uint64_t seed,
                                                const StochasticBoundsParams& prm = {});

}  // namespace wicknls
