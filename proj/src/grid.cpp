#include "wicknls/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace wicknls {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Field embed_spectral(const Field& f, const GridSpec& fine) {
  const GridSpec& gc = f.grid;
  require(f.tag == Tag::spectral, "embed: spectral field required");
  require(fine.L == gc.L && fine.n >= gc.n, "embed: target must refine the same box");
  Field out(fine, Tag::spectral);
  const int n = gc.n;
  const bool split = fine.n > n;  // coarse Nyquist line becomes two interior lines
  auto place = [&](int m) { return m >= 0 ? m : m + fine.n; };
  for (int a1 = 0; a1 < n; ++a1) {
    int m1 = gc.mode(a1);
    for (int a2 = 0; a2 < n; ++a2) {
      int m2 = gc.mode(a2);
      cd val = f.at(a1, a2);
      if (split && m1 == -n / 2 && m2 == -n / 2) {
        cd q = 0.25 * val;
        for (int s1 : {-n / 2, n / 2})
          for (int s2 : {-n / 2, n / 2}) out.at(place(s1), place(s2)) += q;
      } else if (split && m1 == -n / 2) {
        out.at(place(-n / 2), place(m2)) += 0.5 * val;
        out.at(place(n / 2), place(m2)) += 0.5 * val;
      } else if (split && m2 == -n / 2) {
        out.at(place(m1), place(-n / 2)) += 0.5 * val;
        out.at(place(m1), place(n / 2)) += 0.5 * val;
      } else {
        out.at(place(m1), place(m2)) = val;
      }
    }
  }
  return out;
}

cd integrate(const Field& f) {
  require(f.tag == Tag::physical, "integrate: field must be physical");
  cd s = 0.0;
  for (const cd& x : f.v) s += x;
  double h = f.grid.h();
  return s * (h * h);
}

double l2_norm(const Field& f) {
  require(f.tag == Tag::physical, "l2_norm: field must be physical");
  double s = 0.0;
  for (const cd& x : f.v) s += std::norm(x);
  return std::sqrt(s) * f.grid.h();
}

Spectral::Spectral(GridSpec g) : g_(g), buf_(size_t(g.size())) {
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto* b = reinterpret_cast<fftw_complex*>(buf_.data());
  // UNALIGNED so the plans can run on any caller array via fftw_execute_dft;
  // ESTIMATE keeps the plan choice deterministic across runs.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plan_fwd_ = fftw_plan_dft_2d(g_.n, g_.n, b, b, FFTW_FORWARD, flags);
  plan_bwd_ = fftw_plan_dft_2d(g_.n, g_.n, b, b, FFTW_BACKWARD, flags);
  require(plan_fwd_ && plan_bwd_, "fftw plan creation failed");
}

Spectral::~Spectral() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void Spectral::execute(std::vector<cd>& a, bool fwd) const {
  // plans were created for buf_; run them on the caller's array via the
  // new-array interface (same size and interleaved layout)
  auto* p = static_cast<fftw_plan>(fwd ? plan_fwd_ : plan_bwd_);
  auto* d = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(p, d, d);
}

void Spectral::forward_inplace(std::vector<cd>& a) const {
  execute(a, true);
  double s = g_.h() * g_.h() / g_.L;
  for (cd& x : a) x *= s;
}

void Spectral::inverse_inplace(std::vector<cd>& a) const {
  execute(a, false);
  // fftw backward is unnormalized: scale by (1/n^2) * (L/h^2) = 1/L
  double s = 1.0 / g_.L;
  for (cd& x : a) x *= s;
}

Field Spectral::forward(const Field& f) const {
  require(f.grid == g_, "forward: grid mismatch");
  require(f.tag == Tag::physical, "forward: field already spectral");
  Field out = f;
  out.tag = Tag::spectral;
  forward_inplace(out.v);
  return out;
}

Field Spectral::inverse(const Field& f) const {
  require(f.grid == g_, "inverse: grid mismatch");
  require(f.tag == Tag::spectral, "inverse: field already physical");
  Field out = f;
  out.tag = Tag::physical;
  inverse_inplace(out.v);
  return out;
}

std::pair<Field, Field> Spectral::gradient(const Field& f) const {
  require(f.grid == g_, "gradient: grid mismatch");
  const int n = g_.n;
  Field fh = (f.tag == Tag::physical) ? forward(f) : f;
  Field d1(g_, Tag::spectral), d2(g_, Tag::spectral);
  for (int a1 = 0; a1 < n; ++a1) {
    // odd multiplier: zero the m = -n/2 line instead of keeping its
    // sign-ambiguous frequency
    double k1 = (a1 == n / 2) ? 0.0 : g_.kfreq(a1);
    for (int a2 = 0; a2 < n; ++a2) {
      double k2 = (a2 == n / 2) ? 0.0 : g_.kfreq(a2);
      const cd& x = fh.at(a1, a2);
      d1.at(a1, a2) = cd(0.0, k1) * x;
      d2.at(a1, a2) = cd(0.0, k2) * x;
    }
  }
  if (f.tag == Tag::physical) return {inverse(d1), inverse(d2)};
  return {std::move(d1), std::move(d2)};
}

Field Spectral::laplacian(const Field& f) const {
  require(f.grid == g_, "laplacian: grid mismatch");
  const int n = g_.n;
  Field fh = (f.tag == Tag::physical) ? forward(f) : f;
  Field out(g_, Tag::spectral);
  for (int a1 = 0; a1 < n; ++a1) {
    double k1 = g_.kfreq(a1);
    for (int a2 = 0; a2 < n; ++a2) {
      double k2 = g_.kfreq(a2);
      out.at(a1, a2) = -(k1 * k1 + k2 * k2) * fh.at(a1, a2);
    }
  }
  if (f.tag == Tag::physical) return inverse(out);
  return out;
}

}  // namespace wicknls
