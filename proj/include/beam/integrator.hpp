#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "beam/errors.hpp"
#include "beam/model.hpp"

namespace beam {

enum class Scheme { kRk4, kImex };

std::string_view SchemeName(Scheme scheme);
/// Accepts "rk4" and "imex"; throws std::invalid_argument otherwise.
Scheme ParseScheme(std::string_view name);
/// rk4 up to 64 modes, imex above.
Scheme DefaultScheme(int modes);

/// Largest rk4 step for the linearization at `state`: 2.8 over the largest
/// modulus of the roots of mass_j r^2 + c_j r + k_j, with
/// k_j = lambda_j + M(S) lambda_j^{1/2} and c_j = N(S) lambda_j^{theta'/2}.
/// For weak damping this is 2.8 / sqrt(k_m / mass_m).
double StabilityBound(const ModelConfig& config, const State& state);

/// Half of StabilityBound.
double AutoTimeStep(const ModelConfig& config, const State& state);

/// Advances states by fixed steps. The imex scheme caches per-mode
/// propagators, so one Stepper should be reused along a trajectory.
///
/// imex is second-order exponential Runge-Kutta (ETD2RK) on
///   mass_j y'' + N* d_j y' + (lambda_j + M* mu_j) y = r_j,
/// with M*, N* frozen at the bulge S* of the last rebuild and everything else
/// in r. Propagators are rebuilt when S leaves [0.99 S*, 1.01 S*].
class Stepper {
 public:
  Stepper(const ModelConfig& config, Scheme scheme, double dt);

  /// Throws DivergenceError naming the first non-finite mode.
  State Step(const State& state);

  Scheme scheme() const { return scheme_; }
  double dt() const { return dt_; }
  int rebuilds() const { return rebuilds_; }

 private:
  State StepRk4(const State& state) const;
  State StepImex(const State& state);
  void Rebuild(double s);
  ModalVector Residual(const ModalVector& y, const ModalVector& v) const;

  ModelConfig config_;
  Scheme scheme_;
  double dt_;
  // imex cache, one entry per mode.
  bool built_ = false;
  double frozen_s_ = 0.0;
  double frozen_m_ = 0.0;
  double frozen_n_ = 0.0;
  int rebuilds_ = 0;
  Eigen::MatrixXd prop_;  // m x 4: e^{Lh} entries (00, 01, 10, 11)
  Eigen::MatrixXd phi1_;  // m x 2: h phi_1(Lh) e_2 / mass
  Eigen::MatrixXd phi2_;  // m x 2: h phi_2(Lh) e_2 / mass
};

/// Single step with a fresh Stepper.
State Step(const ModelConfig& config, const State& state, double dt,
           Scheme scheme);

/// u_tt at the state; the same quantity as Acceleration.
ModalVector SecondTimeDerivative(const ModelConfig& config, const State& state);

/// Extra per-sample scalar recorded next to the built-in columns.
struct Observer {
  std::string name;
  std::function<double(const ModelConfig&, const State&)> evaluate;
};

struct TrajectoryRecord {
  explicit TrajectoryRecord(ModelConfig c) : config(std::move(c)) {}

  ModelConfig config;
  Scheme scheme = Scheme::kRk4;
  /// Effective step: T divided by the step count.
  double dt = 0.0;
  long steps = 0;
  int stride = 1;
  std::vector<State> states;
  std::vector<double> energy;
  std::vector<double> dissipation;
  std::vector<double> phase_norm;
  std::vector<std::string> observer_names;
  /// observer_values[k][i]: observer i at sample k.
  std::vector<std::vector<double>> observer_values;
  bool diverged = false;
  std::string divergence_message;

  std::size_t size() const { return states.size(); }
  std::vector<double> times() const;
  const State& back() const { return states.back(); }
};

/// Carries the samples recorded before the failure.
class TrajectoryDiverged : public DivergenceError {
 public:
  TrajectoryDiverged(const DivergenceError& cause,
                     std::shared_ptr<const TrajectoryRecord> partial)
      : DivergenceError(cause), partial_(std::move(partial)) {}

  const TrajectoryRecord& partial() const { return *partial_; }

 private:
  std::shared_ptr<const TrajectoryRecord> partial_;
};

struct IntegrationSettings {
  double T = 0.0;
  double dt = 0.0;
  int stride = 1;
  Scheme scheme = Scheme::kRk4;
};

/// ceil(T / dt) steps of size T / n from state0, recording every stride-th
/// state (and always the last). T = 0 records state0 only. Throws
/// TrajectoryDiverged.
TrajectoryRecord Integrate(const ModelConfig& config, const State& state0,
                           const IntegrationSettings& settings,
                           const std::vector<Observer>& observers = {});

}  // namespace beam
