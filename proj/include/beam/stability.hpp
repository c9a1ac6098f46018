#pragma once

// Two-trajectory estimates: phase-space norms, the difference functional,
// continuous dependence, the stability inequality, continuity in alpha and
// Hoelder continuity in weak norms.

#include <optional>
#include <vector>

#include "beam/integrator.hpp"
#include "beam/model.hpp"

namespace beam {

/// Weakening exponent 0 < s <= 1 of the norm
///   ||(u,v)||^2 = ||A^{(1-s)/2}u||^2 + ||A^{-s/2}v||^2
///                 + alpha ||A^{theta/4 - s/2}v||^2.
struct WeakNormSpec {
  /// Throws std::invalid_argument outside (0, 1].
  explicit WeakNormSpec(double s);
  double s;
};

double PhaseNormSquared(const ModelConfig& config, const State& state,
                        const std::optional<WeakNormSpec>& spec = {});
double PhaseNorm(const ModelConfig& config, const State& state,
                 const std::optional<WeakNormSpec>& spec = {});

/// Componentwise a - b (time taken from a).
State Difference(const State& a, const State& b);

/// 1/2 (||A^{1/2}w||^2 + ||w_t||^2 + alpha ||A^{theta/4}w_t||^2
///      + M(S_a) ||A^{1/4}w||^2), w = y_a - y_b.
double DifferenceFunctional(const ModelConfig& config, const State& a,
                            const State& b);

struct LipschitzReport {
  /// sup_t ||z(t) - z~(t)|| / ||z0 - z~0||.
  double sup_ratio = 0.0;
  /// log(sup_ratio) / T.
  double fitted_C = 0.0;
};

/// Throws std::invalid_argument when the initial states coincide.
LipschitzReport LipschitzCheck(const ModelConfig& config, const State& z0,
                               const State& z0_tilde,
                               const IntegrationSettings& settings);

/// ||A^{1/4}w||^2 + ||w||^{p+2}_{L^{p+2}}, the lower-order integrand.
double LowerOrderTerm(const ModelConfig& config, const ModalVector& w);

struct StabilityReport {
  bool feasible = false;
  /// Best pair: the largest feasible delta, with its smallest grid C.
  double C = 0.0;
  double delta = 0.0;
  std::vector<double> times;
  /// ||z_a - z_b||^2.
  std::vector<double> lhs;
  /// Right-hand side at the best pair (empty when infeasible).
  std::vector<double> rhs;
  std::vector<double> lower_order;
  /// Per delta on the grid: smallest grid C that works, or +inf.
  std::vector<double> delta_grid;
  std::vector<double> C_needed;
};

/// The (C, delta) grids: 25 log-spaced delta in [1e-4, 10], 33 log-spaced C
/// in [1e-2, 1e6].
std::vector<double> StabilityDeltaGrid();
std::vector<double> StabilityCGrid();

/// Evaluates the stability inequality on two records with identical sample
/// times. The convolution integral uses the exponential trapezoid rule.
StabilityReport AnalyzeStabilityInequality(const TrajectoryRecord& a,
                                           const TrajectoryRecord& b);

/// Integrates both states and analyzes them; throws Infeasible when no grid
/// pair satisfies the inequality.
StabilityReport StabilityInequalityCheck(const ModelConfig& config,
                                         const State& z0a, const State& z0b,
                                         const IntegrationSettings& settings);

struct AlphaScanReport {
  std::vector<double> alphas;
  /// sup_t ||z^alpha(t) - z^0(t)|| in the alpha = 0 phase norm.
  std::vector<double> distance;
  /// Log-log fit D ~ C alpha^rho over the positive alphas, when there are at
  /// least three.
  std::optional<double> rho;
  std::optional<double> C;
  double dt = 0.0;

  /// D strictly decreasing as alpha decreases over the positive alphas.
  bool StrictlyDecreasing() const;
};

/// All members use one step: settings.dt, or when it is <= 0 the smallest
/// AutoTimeStep over the alphas (the alpha = 0 one). Trajectories run on the
/// worker pool.
AlphaScanReport AlphaContinuityScan(const ModelConfig& config_template,
                                    const State& z0,
                                    const std::vector<double>& alphas,
                                    const IntegrationSettings& settings);

struct HolderReport {
  double exponent = 1.0;
  std::vector<double> taus;
  std::vector<double> increments;
};

/// Slope of log sup_t ||z(t+tau) - z(t)|| against log tau over dyadic lags
/// tau = 2^i dt_sample, 2^i <= (n-1)/4, capped at 1. Throws
/// std::invalid_argument below 50 samples.
HolderReport HolderExponentWeak(const TrajectoryRecord& record,
                                const WeakNormSpec& spec);

}  // namespace beam
