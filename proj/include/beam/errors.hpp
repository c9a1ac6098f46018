#pragma once

#include <stdexcept>
#include <string>

namespace beam {

/// Vector length does not match the basis mode count (or grid size).
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state or nonlinear force became non-finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int mode, double time)
      : std::runtime_error("non-finite value in mode " + std::to_string(mode) +
                           " at t=" + std::to_string(time)),
        mode_(mode),
        time_(time) {}

  /// 1-based mode index, or 0 when the failure is in physical space.
  int mode() const { return mode_; }
  double time() const { return time_; }

 private:
  int mode_;
  double time_;
};

class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularJacobian : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// decay_fit could not find a plateau in the tail of the record.
class NonPlateau : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No (C, delta) pair on the search grid satisfies the stability inequality.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace beam
