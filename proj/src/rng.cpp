#include "wicknls/rng.hpp"

#include <cmath>

namespace wicknls {

namespace {

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  uint64_t p = uint64_t(a) * uint64_t(b);
  hi = uint32_t(p >> 32);
  lo = uint32_t(p);
}

constexpr uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline double u64_to_unit(uint32_t hi, uint32_t lo) {
  // (0,1]: the +1 keeps log() finite at the all-zero block
  uint64_t u = (uint64_t(hi) << 32) | lo;
  return double(u + 1) * 0x1p-64;
}

}  // namespace

std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& ctr,
                                   const std::array<uint32_t, 2>& key) {
  std::array<uint32_t, 4> c = ctr;
  std::array<uint32_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

std::pair<double, double> CounterRng::uniform_pair(uint32_t i, uint32_t j) const {
  auto b = block(i, j);
  return {u64_to_unit(b[0], b[1]), u64_to_unit(b[2], b[3])};
}

std::pair<double, double> CounterRng::normal_pair(uint32_t i, uint32_t j) const {
  auto [u1, u2] = uniform_pair(i, j);
  double r = std::sqrt(-2.0 * std::log(u1));
  double th = 2.0 * M_PI * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

}  // namespace wicknls
