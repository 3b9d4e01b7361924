// signed_log.hpp - sign / log-magnitude representation for long products
#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace xychain {

// Value = sign * exp(log_abs). sign == 0 encodes an exact zero.
// Keeps products of thousands of cosh/sinh factors inside double range.
struct SignedLog {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static SignedLog from_value(double x) {
    if (x == 0.0) return {};
    return {std::log(std::abs(x)), x > 0.0 ? 1 : -1};
  }
  static SignedLog one() { return {0.0, 1}; }

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  SignedLog& operator*=(const SignedLog& o) {
    if (sign == 0 || o.sign == 0) {
      *this = SignedLog{};
    } else {
      log_abs += o.log_abs;
      sign *= o.sign;
    }
    return *this;
  }
  friend SignedLog operator*(SignedLog a, const SignedLog& b) { return a *= b; }
};

// Signed log-sum-exp of the given terms.
inline SignedLog signed_log_sum(const std::vector<SignedLog>& terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms)
    if (t.sign != 0 && t.log_abs > top) top = t.log_abs;
  if (!std::isfinite(top)) return {};
  double acc = 0.0;
  for (const auto& t : terms)
    if (t.sign != 0) acc += t.sign * std::exp(t.log_abs - top);
  if (acc == 0.0) return {};
  return {top + std::log(std::abs(acc)), acc > 0.0 ? 1 : -1};
}

}  // namespace xychain
