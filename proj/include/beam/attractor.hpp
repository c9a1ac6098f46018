#pragma once

// Stationary states, omega-limit clouds and set-level diagnostics of the
// attractor.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "beam/integrator.hpp"
#include "beam/model.hpp"
#include "beam/stability.hpp"

namespace beam {

struct StationaryResult {
  ModalVector y;
  /// Newton steps taken; 0 when the guess already meets the tolerance.
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Newton's method on StationaryResidual with a backtracking line search on
/// ||G||^2 (up to 30 halvings). Throws NoConvergence after max_iter steps and
/// SingularJacobian when the Jacobian cannot be factored.
StationaryResult StationarySolve(const ModelConfig& config,
                                 const ModalVector& guess, double tol,
                                 int max_iter);

/// Finite set of states, embedded so that Euclidean distance between rows of
/// coordinates() is the phase-space distance of the chosen norm.
class PointCloud {
 public:
  /// The norm is the phase norm of `norm_config` (its alpha and theta), weak
  /// when `weak` is set.
  PointCloud(const ModelConfig& norm_config, std::vector<State> states,
             std::optional<WeakNormSpec> weak = {});

  const std::vector<State>& states() const { return states_; }
  const Eigen::MatrixXd& coordinates() const { return coords_; }
  std::size_t size() const { return states_.size(); }
  int modes() const { return modes_; }
  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  const std::optional<WeakNormSpec>& weak() const { return weak_; }

 private:
  std::vector<State> states_;
  Eigen::MatrixXd coords_;
  int modes_;
  double alpha_;
  double theta_;
  std::optional<WeakNormSpec> weak_;
};

struct OmegaSettings {
  double T_transient = 0.0;
  double T_sample = 0.0;
  /// Steps between collected samples.
  int stride = 1;
  double dt = 0.0;
  Scheme scheme = Scheme::kRk4;
};

/// States on [T_transient, T_transient + T_sample] every `stride` steps,
/// one run per initial state, merged in order. Runs use the worker pool.
std::vector<State> OmegaLimitStates(const ModelConfig& config,
                                    const std::vector<State>& initials,
                                    const OmegaSettings& settings);

/// Single-trajectory cloud in the phase norm of `config`.
PointCloud OmegaLimitSample(const ModelConfig& config, const State& z0,
                            const OmegaSettings& settings);

/// sup_{a in A} min_{b in B} ||a - b||. Throws std::invalid_argument for an
/// empty cloud or clouds measured in different norms.
double HausdorffSemidistance(const PointCloud& a, const PointCloud& b);

struct BoxCount {
  double dimension = 0.0;
  std::vector<double> eps;
  std::vector<long> counts;
};

/// Counts occupied cells floor((x - x_min) / eps) of the rows of `points`,
/// x_min the componentwise minimum (so rigid translations leave the counts
/// unchanged), and fits the
/// slope of log n against log(1/eps). Throws std::invalid_argument for fewer
/// than four distinct positive eps, no points, or more than 8 columns.
BoxCount BoxCountingDimension(const Eigen::MatrixXd& points,
                              const std::vector<double>& eps);

/// Projects onto the displacement coordinates y_1..y_d first.
BoxCount BoxCountingDimension(const PointCloud& cloud, int d,
                              const std::vector<double>& eps);

struct GradientReport {
  /// Largest energy increase between consecutive samples.
  double max_energy_increase = 0.0;
  /// 10 x the energy-identity residual, in absolute units.
  double energy_tolerance = 0.0;
  bool energy_monotone = false;
  double terminal_velocity = 0.0;
  double terminal_residual = 0.0;
  State terminal;
};

GradientReport GradientStructureCheck(const ModelConfig& config,
                                      const State& z0,
                                      const IntegrationSettings& settings);

struct RegularityReport {
  double sup_Au = 0.0;
  double sup_sqrtA_v = 0.0;
  double sup_second_energy = 0.0;
};

RegularityReport AttractorRegularityCheck(const ModelConfig& config,
                                          const std::vector<State>& cloud);

struct UscReport {
  std::vector<double> alphas;
  /// h(cloud_alpha, cloud_0) in the alpha = 0 phase norm.
  std::vector<double> distance;
  /// Non-increasing along the given order up to noise_floor.
  bool decreasing = false;
};

/// One omega-limit cloud per alpha (plus the alpha = 0 reference) from the
/// same initial states. With settings.dt <= 0 each alpha uses its own
/// AutoTimeStep.
UscReport UpperSemicontinuityScan(const ModelConfig& config_template,
                                  const std::vector<double>& alphas,
                                  const std::vector<State>& initials,
                                  const OmegaSettings& settings,
                                  double noise_floor);

}  // namespace beam
