#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "wicknls/grid.hpp"

// Littlewood-Paley projectors and the weighted norm family built on them:
// L^p_mu, W^{1,p}_mu, H^s_mu, B^alpha_{p,q,mu}, C^alpha_mu.  H^s_mu and
// C^alpha_mu are literal aliases of B^s_{2,2,mu} and B^alpha_{inf,inf,mu}.
// Weights are <d(x)>^mu with d the wrapped (torus) distance to the origin,
// so <0> = 1 and the weight stays smooth across the period boundary.

namespace wicknls {

enum class NormKind { lebesgue, sobolev_w1p, sobolev_hs, besov, holder };

struct NormSpec {
  NormKind kind = NormKind::sobolev_hs;
  double alpha = 0.0;  // regularity; unused for lebesgue / sobolev_w1p
  double p = 2.0;      // integrability, 1 <= p <= inf
  double q = 2.0;      // dyadic summability, 1 <= q <= inf
  double mu = 0.0;     // weight exponent
};

NormSpec sobolev_norm(double s, double mu);                   // H^s_mu
NormSpec holder_norm(double alpha, double mu);                // C^alpha_mu
NormSpec lebesgue_norm(double p, double mu);                  // L^p_mu
NormSpec w1p_norm(double p, double mu);                       // W^{1,p}_mu
NormSpec besov_spec(double alpha, double p, double q, double mu);

// Throws if p or q falls outside [1, inf].
void validate_norm_spec(const NormSpec& spec);

// Short label for reports, e.g. "H^{1.5}_{0.1}" or "B^{-0.5}_{inf,inf,-0.75}".
std::string describe(const NormSpec& spec);

// Dyadic partition 1 = psi(|k|) + sum_N [psi(|k|/2N) - psi(|k|/N)] with
// levels N in {1, 2, ..., Nmax}, Nmax = 2^ceil(log2(0.9 kny)); the low block
// is bookkept as level 1/2.  psi is exactly 1 on [0,1/2] and 0 on [1,inf),
// so each annulus symbol vanishes identically outside (N/2, 2N) and the
// partition sums to exactly 1 below Nmax.
class LPDecomp {
 public:
  explicit LPDecomp(const GridSpec& g);

  const GridSpec& grid() const { return g_; }
  const std::vector<double>& levels() const { return levels_; }
  const std::vector<std::vector<double>>& symbols() const { return symbols_; }

  // Delta_N f.  Physical input -> physical output; spectral stays spectral.
  Field project(Spectral& sp, const Field& f, double N) const;

 private:
  GridSpec g_;
  std::vector<double> levels_;
  std::vector<std::vector<double>> symbols_;
};

// <d(x)>^mu as a physical field (real values, imaginary parts zero).
Field weight_field(const GridSpec& g, double mu);

// Weighted quadrature norm (h^2 sum (|f| w)^p)^{1/p}, max when p = inf.
double weighted_lp(const Field& f, const Field& w, double p);

double norm(Spectral& sp, const LPDecomp& lp, const Field& f, const NormSpec& spec);

// Pull-weight ratio r = ||f||_{B_mu} / ||f <x>^mu||_{B_0}; equals 1 at mu=0.
double check_pull_weight(Spectral& sp, const LPDecomp& lp, const Field& f,
                         const NormSpec& spec);

struct CommutatorReport {
  std::vector<double> levels;
  std::vector<double> c_n;  // N ||Delta_N(w f) - w Delta_N f||_p / ||f||_p
  double sup = 0.0;
};

CommutatorReport check_commutator(Spectral& sp, const LPDecomp& lp, const Field& f,
                                  double delta, double p);

// Calibration corpus member: complex Gaussian modes under a Gaussian spectral
// envelope hard-cut at kcut = 0.25 pi 64 / L (a fixed physical band, so every
// n >= 64 realizes the same field), real part, L^2-normalized.  Draws are
// keyed by signed mode through the counter RNG.
Field corpus_field(Spectral& sp, uint64_t master, uint32_t member);

// Periodized Gaussian exp(-|x - x0|^2 / (2 sigma^2)), 3x3 images.
Field gauss_bump(const GridSpec& g, double sigma, double x0 = 0.0, double y0 = 0.0);

}  // namespace wicknls
