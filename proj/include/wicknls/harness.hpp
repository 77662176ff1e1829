#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include "wicknls/config.hpp"
#include "wicknls/svg.hpp"

// Coupled eps-ladder experiments and their reports.  Every ladder member
// sees the same white-noise realization (same seed/stream; only the
// mollification scale differs) — the coupling is certified by hashing the
// shared xi snapshot.  Reports are deterministic functions of the inputs;
// wall_seconds is informational and kept out of emitted file contents.

namespace wicknls {

// Periodized exp(-|x|^2): spectral datum (pi/L) e^{-|k|^2/4} with the
// centering phase (-1)^{m1+m2}.
Field default_datum(Spectral& sp);

// Random band-limited datum: iid complex Gaussian modes damped by
// exp(-|k|^2 / (2 kappa^2)), L^2-normalized.  Not real-valued.
Field smooth_datum(Spectral& sp, double kappa, uint64_t seed);

std::vector<double> dyadic_ladder(int kmin, int kmax);  // {2^-kmin, ..., 2^-kmax}

// SHA-256 of the snapshot serialization (grid header + raw doubles).
std::string hash_field(const Field& f);

struct ConvergenceReport {
  std::vector<double> eps_ladder;
  NormSpec norm_spec;
  std::vector<double> gaps_norm;       // sup_t of ||v_k - v_{k+1}|| per adjacent pair
  std::vector<double> gaps_l2w;        // companion sup gaps in L^2_{-0.1}
  std::vector<double> final_gaps_l2w;  // the same L^2_{-0.1} gaps at t = T exactly
  double fitted_rate = 0.0;  // LSQ decay exponent of gaps_norm per eps-halving
  bool monotone = false;     // gaps_norm strictly decreasing along the ladder
  std::string xi_hash;       // shared across members by construction (verified)
  uint64_t steps = 0;
  double wall_seconds = 0.0;
};

// March the whole ladder in lockstep from v0 and record the sup of the
// adjacent-pair gaps over the sampled times (every cadence-th step plus t=0
// and t=T).  Unless base.allow_coarse, the finest member must satisfy
// eps >= 4h; the error suggests the resolvable sub-ladder when not.
ConvergenceReport run_convergence(Spectral& sp, const SimConfig& base,
                                  const std::vector<double>& eps_ladder, const NormSpec& ns,
                                  const Field& v0);

struct RenormReport {
  std::vector<double> eps_ladder;
  std::vector<double> c_eps;                // per ladder member
  std::vector<double> corrected_gaps;       // L^2_{-0.1} at t = T, per adjacent pair
  std::vector<double> corrected_sup_gaps;   // sup over sampled times
  double uncorrected_finest_gap = 0.0;      // finest pair, c_eps dropped, at t = T
  double uncorrected_sup_gap = 0.0;
  double ratio = 0.0;    // uncorrected_finest_gap / corrected_gaps.back()
  double delta_c = 0.0;  // c_eps gap across the finest pair
  // max over samples and uncorrected members of ||w' - e^{-i c_eps t} w|| / ||w||:
  // the raw flow differs from the renormalized one by a pure phase
  double phase_identity_residual = 0.0;
  std::string xi_hash;
  uint64_t steps = 0;
  double wall_seconds = 0.0;
};

// The corrected ladder plus, on the finest pair, a second pair of walkers
// integrating the raw (c_eps dropped) flow: 6 honest integrations.  The
// corrected gaps converge; the raw finest-pair gap stalls at the phase
// floor 2|sin(Delta c T/2)| ||v||.
RenormReport run_renormalization_demo(Spectral& sp, const SimConfig& base,
                                      const std::vector<double>& eps_ladder,
                                      const Field& v0);

// verify_stochastic_bounds behind the campaign door: refuses M < 20 and
// reports through campaign_text deterministically (fixed master seed ->
// identical bytes).
StochasticBoundsReport run_stochastic_campaign(const GridSpec& g,
                                               const std::vector<double>& eps_ladder, int M,
                                               uint64_t seed,
                                               const StochasticBoundsParams& prm = {});

std::string convergence_csv(const ConvergenceReport& rep);
SvgPlot convergence_plot(const ConvergenceReport& rep);
std::string renorm_text(const RenormReport& rep);
std::string campaign_text(const StochasticBoundsReport& rep);
std::string ledger_csv(const EnergyLedger& led);

struct RunManifest {
  std::string tool;         // subcommand name
  std::string config_echo;  // dump_config of the run's configuration
  struct Entry {
    std::string sha;
    uint64_t bytes = 0;
    std::string rel;
  };
  std::vector<Entry> files;
  std::string status;  // "pass" / "fail" / "done"
  uint64_t steps = 0;
  double wall_seconds = 0.0;  // informational; ignored by the resume check
};

// Write content to dir/rel unless an identical file is already present
// (hash compare); record the manifest entry either way.  Returns true when
// the write was skipped.
bool emit_file(const std::filesystem::path& dir, const std::string& rel,
               const std::string& content, RunManifest& man);

std::string manifest_text(const RunManifest& man);
void write_manifest(const std::filesystem::path& dir, const RunManifest& man);

// Resume check: true when dir/manifest.txt exists, was written by the same
// tool with the same config echo, carries the given status or better, and
// every file entry still hashes to its recorded digest.
bool outputs_current(const std::filesystem::path& dir, const std::string& tool,
                     const std::string& config_echo, std::string* status_out = nullptr);

}  // namespace wicknls
