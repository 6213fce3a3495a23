#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fmcf {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (bad dimension, bad size, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A field that must be finite carries "-inf" sentinel nodes.
class NonFiniteFieldError : public Error {
 public:
  NonFiniteFieldError() : Error("field not finite") {}
};

/// The explicit scheme produced NaN or overflow.
class BlowUpError : public Error {
 public:
  explicit BlowUpError(std::size_t step)
      : Error("blow-up detected at step " + std::to_string(step)), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// The constrained minimization could not certify the requested accuracy.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double best_gap) : Error(what), best_gap_(best_gap) {}
  double best_gap() const { return best_gap_; }

 private:
  double best_gap_;
};

/// The value function has the same sign at both ends of the speed bracket.
class BracketError : public Error {
 public:
  BracketError(double mu_low, double mu_high)
      : Error("bracket failure: mu(low) = " + std::to_string(mu_low) +
              ", mu(high) = " + std::to_string(mu_high)),
        mu_low_(mu_low),
        mu_high_(mu_high) {}
  double mu_low() const { return mu_low_; }
  double mu_high() const { return mu_high_; }

 private:
  double mu_low_;
  double mu_high_;
};

/// The forcing admits no witness set for the existence hypothesis, so the
/// speed computation is refused.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Thresholding the minimizer left no node inside the support.
class EmptySupportError : public Error {
 public:
  EmptySupportError() : Error("empty support after thresholding") {}
};

}  // namespace fmcf
