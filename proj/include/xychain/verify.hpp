// verify.hpp - self-contained identity suite: oracle equivalence, reductions,
// derivative cross-checks, correlator limits, and the zeta layer.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xychain {

struct VerifyOptions {
  int max_sites = 8;     // dense-oracle cap for randomized identities
  double tol = 1e-10;    // oracle-equivalence tolerance
  int samples = 50;      // random instances per chain size
  std::uint64_t seed = 0x2545f4914f6cdd1dULL;
};

struct CheckResult {
  std::string name;
  int criterion = 0;     // acceptance criterion the check belongs to (1..7)
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  double oracle_seconds = 0.0;    // time spent in the randomized oracle sweep
  bool accuracy_failure = false;  // a quadrature/tracking loop gave up

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !accuracy_failure;
  }
};

VerifyReport run_verification(const VerifyOptions& options = {});

}  // namespace xychain
