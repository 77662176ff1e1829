#pragma once
#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "wicknls/errors.hpp"

// Periodic box [-L/2, L/2)^2, n x n points, and the discrete transform pair
//
//   fhat(k) = (h^2/L) sum_j f_j e^{-i k x_j},   f_j = (1/L) sum_k fhat(k) e^{i k x_j}
//
// with k = (2pi/L) m, m in signed FFT order.  This normalization makes
// Plancherel constant-free:  integral |f|^2 dx  =  sum_k |fhat(k)|^2,  and a
// physical-space convolution becomes multiplication by the kernel's analyst
// symbol  int g(x) e^{-ikx} dx.

namespace wicknls {

using cd = std::complex<double>;

struct GridSpec {
  int n = 0;
  double L = 0.0;

  GridSpec() = default;
  GridSpec(int n_, double L_) : n(n_), L(L_) {
    require(n >= 8 && n % 2 == 0, "grid: n must be even and >= 8");
    require(L > 0.0, "grid: box length must be positive");
  }

  double h() const { return L / n; }
  int size() const { return n * n; }
  double nyquist() const { return M_PI * n / L; }
  // largest |k| on the lattice (the corner mode)
  double kmax_lattice() const { return M_PI * std::sqrt(2.0) * n / L; }
  // physical coordinate of index j (row or column)
  double coord(int j) const { return -0.5 * L + h() * j; }
  // signed mode index of storage index a (FFT order)
  int mode(int a) const { return a < n / 2 ? a : a - n; }
  double kfreq(int a) const { return 2.0 * M_PI / L * mode(a); }

  bool operator==(const GridSpec& o) const { return n == o.n && L == o.L; }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

enum class Tag : uint8_t { physical = 0, spectral = 1 };

// Immutable-by-convention value type; row-major, index (j1, j2) -> j1*n + j2.
struct Field {
  GridSpec grid;
  Tag tag = Tag::physical;
  std::vector<cd> v;

  Field() = default;
  Field(GridSpec g, Tag t) : grid(g), tag(t), v(size_t(g.size())) {}

  cd& at(int j1, int j2) { return v[size_t(j1) * grid.n + j2]; }
  const cd& at(int j1, int j2) const { return v[size_t(j1) * grid.n + j2]; }
};

// Band-limited embedding of a spectral field into a finer grid on the same
// box: coefficients are copied by signed mode (values are grid-independent
// under the analyst normalization); a coarse Nyquist-line coefficient is
// split evenly between the +-n/2 modes it represents, so real fields stay
// real and the result is the minimal-norm trigonometric interpolant.
Field embed_spectral(const Field& f, const GridSpec& fine);

// h^2 sum of values; the discrete L^2 pairing (trapezoid = rectangle on the
// periodic grid).  Physical fields only.
cd integrate(const Field& f);

double l2_norm(const Field& f);  // sqrt(integral |f|^2)

// Per-worker transform engine: owns FFTW plans and a scratch buffer for one
// grid size.  Plan creation is globally serialized (FFTW requirement); with
// FFTW_ESTIMATE the plan choice is deterministic, so outputs are
// reproducible run-to-run.  An engine is not thread-safe; give each worker
// its own.
class Spectral {
 public:
  explicit Spectral(GridSpec g);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const GridSpec& grid() const { return g_; }

  Field forward(const Field& f) const;  // physical -> spectral
  Field inverse(const Field& f) const;  // spectral -> physical

  // Hot-path transforms on raw storage (no tag bookkeeping).
  void forward_inplace(std::vector<cd>& a) const;
  void inverse_inplace(std::vector<cd>& a) const;

  // d/dx_j by spectral multiplier i k_j with the Nyquist line of each odd
  // multiplier zeroed (keeps real fields real under differentiation).
  // Physical input gives physical output; spectral input stays spectral.
  std::pair<Field, Field> gradient(const Field& f) const;
  // -|k|^2 multiplier (even symbol: no Nyquist special-casing).
  Field laplacian(const Field& f) const;

 private:
  void execute(std::vector<cd>& a, bool fwd) const;
  GridSpec g_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  mutable std::vector<cd> buf_;
};

}  // namespace wicknls
