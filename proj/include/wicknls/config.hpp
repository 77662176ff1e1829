#pragma once
#include <filesystem>
#include <string>

#include "wicknls/dynamics.hpp"

// Flat key=value run configuration shared by the CLI subcommands.  Lines
// are `key = value`, '#' starts a comment, keys are fixed (unknown keys are
// a ConfigError so typos fail loudly).

namespace wicknls {

struct RunConfig {
  SimConfig sim;
  int ladder_kmin = 3;  // eps ladder 2^-kmin .. 2^-kmax
  int ladder_kmax = 6;
  int mc_M = 100;                           // Monte Carlo draws per level
  NormSpec norm = sobolev_norm(1.5, 0.1);   // convergence gap norm
  std::string datum = "gauss";              // gauss | smooth
  double datum_kappa = 2.0;                 // spectral width of the random datum
  uint64_t datum_seed = 107;
  std::string out_dir;                      // empty: no files written
};

// Parse one `key = value` assignment into cfg (used for both config files
// and --set overrides).  Throws ConfigError on unknown keys or malformed
// values.
void apply_config_line(RunConfig& cfg, const std::string& line);

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::filesystem::path& path);

// The full assignment list in file syntax, one key per line; parsing it
// back reproduces cfg.
std::string dump_config(const RunConfig& cfg);

}  // namespace wicknls
