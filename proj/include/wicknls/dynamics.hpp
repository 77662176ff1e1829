#pragma once
#include <cstdint>
#include <vector>

#include "wicknls/energetics.hpp"

// Time integration of the renormalized primitive equation
//
//   i dw/dt = Lap w + V_pr w - lambda |w|^p w,     V_pr = xi_eps - c_eps,
//
// by Strang splitting: both pointwise-phase substeps are exact (|w| is
// invariant under them) and the spectral linear substep is unitary, so the
// L^2 norm is conserved to roundoff.  The gauged field v = e^{Y_eps} w then
// solves the drift equation (see v_equation_rhs).  A dense RK4 oracle on
// the same semi-discrete system and a direct RK4 integrator for the
// v-equation serve as cross-checks; lambda = 0 realizes the linear
// propagator S_{A,V}.

namespace wicknls {

enum class Scheme { strang_primitive, direct_v_rk4, dense_oracle };

struct SimConfig {
  GridSpec grid;
  double eps = 0.5;
  double dt = 1e-3;
  double T = 1.0;
  double p = 2.0;       // nonlinearity power, >= 1
  double lambda = 1.0;  // defocusing strength, >= 0
  uint64_t seed = 1;
  uint32_t stream = 0;
  Scheme scheme = Scheme::strang_primitive;
  int cadence = 10;           // sampling stride in steps
  bool renormalize = true;    // off: V_pr = xi_eps, the raw (phase-divergent) flow
  bool dealias = false;       // 2/3 rule on the nonlinearity only
  bool allow_coarse = false;  // waive the eps >= 4h resolution rule
  double amplitude = 1.0;     // noise amplitude; 0 injects xi == 0
};

void validate_sim_config(const SimConfig& cfg);

struct Trajectory {
  SimConfig config;
  double c_eps = 0.0;
  std::vector<double> times;
  std::vector<Field> snapshots;  // v at the sampled times; snapshots[0] == v0 verbatim
  EnergyLedger ledger;           // one row per sampled time (when recorded)
  // dt (max|V_pr| + lambda max|w0|^p): phase-rotation resolution heuristic,
  // >= 1 deserves a warning
  double phase_resolution = 0.0;
  uint64_t steps = 0;
};

// One Strang step: half phase, spectral linear step exp(+i dt |k|^2), half
// phase.  v_pr is the (real-valued) potential field.
Field step_strang(Spectral& sp, const Field& w, double dt, const Field& v_pr,
                  double lambda, double p, bool dealias = false);

// Marching engine for the primitive variable: composes step_strang with the
// adjacent half-phases between samples fused (they share the same |w|, so
// the fusion is exact up to one rounding).  Several walkers may share one
// Spectral engine sequentially; the context must outlive the walker.
class StrangWalker {
 public:
  StrangWalker(Spectral& sp, const GaugeContext& ctx, const SimConfig& cfg, const Field& v0);
  void advance(int nsteps);
  uint64_t step() const { return step_; }
  double t() const { return static_cast<double>(step_) * cfg_.dt; }
  const Field& w() const { return w_; }
  Field v() const;  // e^{Y_eps} w
  bool finite() const;
  double max_vpr() const { return max_vpr_; }

 private:
  void phase(double factor);  // multiply by exp(-i factor dt (V_pr - lambda |w|^p))
  void linear();
  Spectral& sp_;
  const GaugeContext& ctx_;
  SimConfig cfg_;
  Field w_;
  std::vector<double> vpr_;
  std::vector<cd> linmul_;
  std::vector<cd> phase_full_, phase_half_;  // precomputed lambda = 0 factors
  double max_vpr_ = 0.0;
  uint64_t step_ = 0;
};

// Right side of the gauged equation:
//   dv/dt = -i (Lap v + Vt v - 2 grad v . grad Y_eps - lambda v |v|^p e^{-p Y_eps})
Field v_equation_rhs(Spectral& sp, const GaugeContext& ctx, const Field& v, double lambda,
                     double p, bool dealias = false);

// Integrate cfg.scheme from v0, sampling v every cadence steps (plus the
// final step) and, when with_ledger, recording the native-grid energy
// functionals at each sample.  Builds the noise bundle from (seed, stream,
// eps, amplitude): a pure function of its arguments.  Throws NumericalAbort
// when the state stops being finite.
Trajectory evolve(Spectral& sp, const SimConfig& cfg, const Field& v0,
                  bool with_ledger = true);

// lambda = 0 propagator S_{A,V}(t) phi via the primitive splitting; the
// ledger's mass and e1 rows are the two linear conservation laws.
Trajectory linear_propagate(Spectral& sp, SimConfig cfg, const Field& phi);

// Discrete L^l((0,T); L^q_mu) space-time norm of the sampled trajectory
// (trapezoid in time; q may be infinite).
double strichartz_norm(const Trajectory& traj, double l, double q, double mu = 0.0);

}  // namespace wicknls
