// errors.hpp - exception taxonomy shared by all modules
#pragma once

#include <stdexcept>
#include <string>

namespace xychain {

// An evaluation hit a removable pole or a vanishing denominator
// (e.g. the parity-weighted trace with a zero-energy mode).
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The simple pole of a zeta function.
class PoleError : public SingularityError {
 public:
  using SingularityError::SingularityError;
};

// A quadrature or phase-tracking loop hit its iteration cap before
// reaching the requested tolerance. Carries the best estimate.
class AccuracyFailure : public std::runtime_error {
 public:
  AccuracyFailure(const std::string& what, double best_estimate, double achieved_error)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        achieved_error_(achieved_error) {}

  double best_estimate() const { return best_estimate_; }
  double achieved_error() const { return achieved_error_; }

 private:
  double best_estimate_;
  double achieved_error_;
};

// A quantity that must be positive (or otherwise constrained) came out
// wrong, typically through catastrophic cancellation.
class InternalInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request exceeds a hard resource guard (dense oracle size cap).
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xychain
