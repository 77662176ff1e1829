#pragma once
#include <array>
#include <cstdint>
#include <utility>

// Counter-based randomness: every draw is a pure function of
// (seed, stream, purpose, i, j).  Fields sampled mode-by-mode therefore do
// not depend on evaluation order or thread schedule, and the same physical
// mode receives the same draw at every resolution (the n <-> 2n coupling the
// refinement tests rely on).

namespace wicknls {

// Philox 4x32-10 block cipher (Salmon et al. 2011 constants).
std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& ctr,
                                   const std::array<uint32_t, 2>& key);

// Draw purposes keep independent uses of one seed on disjoint counters.
namespace purpose {
constexpr uint32_t noise_modes = 0;   // white-noise spectral draws
constexpr uint32_t datum = 1;         // random initial data
constexpr uint32_t corpus = 2;        // lp_besov calibration corpus
constexpr uint32_t scalars = 3;       // generic scalar draws
}  // namespace purpose

class CounterRng {
 public:
  CounterRng(uint64_t seed, uint32_t stream, uint32_t purp)
      : key_{static_cast<uint32_t>(seed & 0xffffffffu),
             static_cast<uint32_t>(seed >> 32)},
        stream_(stream),
        purpose_(purp) {}

  // One 128-bit block per (i,j); lanes 0+1 and 2+3 each give 64 uniform bits.
  std::array<uint32_t, 4> block(uint32_t i, uint32_t j) const {
    return philox4x32({i, j, stream_, purpose_}, key_);
  }

  // Two iid N(0,1) via Box-Muller from a single block; no rejection loops,
  // so the draw count per site is fixed.
  std::pair<double, double> normal_pair(uint32_t i, uint32_t j) const;

  // Two iid uniforms on (0,1] (the half-open side avoids log(0) above).
  std::pair<double, double> uniform_pair(uint32_t i, uint32_t j) const;

 private:
  std::array<uint32_t, 2> key_;
  uint32_t stream_, purpose_;
};

}  // namespace wicknls
