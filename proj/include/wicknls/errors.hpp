#pragma once
#include <stdexcept>
#include <string>

namespace wicknls {

// Exit-code taxonomy of the CLI: usage/config problems are the caller's
// fault (exit 2), numerical aborts are the integrator's (exit 3).
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : UsageError {
  explicit ConfigError(const std::string& msg) : UsageError(msg) {}
};

struct NumericalAbort : std::runtime_error {
  double last_good_time;
  explicit NumericalAbort(const std::string& msg, double t = 0.0)
      : std::runtime_error(msg), last_good_time(t) {}
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

}  // namespace wicknls
