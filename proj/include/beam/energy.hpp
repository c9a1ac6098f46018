#pragma once

// Energy functionals of the Galerkin system.
//
//   E = 1/2 (||A^{1/2}u||^2 + ||v||^2 + alpha ||A^{theta/4}v||^2 + M~(S))
//       + int (f~(u) - h u) dx
//   dE/dt = -N(S) ||A^{theta'/4}v||^2

#include <span>
#include <vector>

#include "beam/integrator.hpp"
#include "beam/model.hpp"

namespace beam {

double Energy(const ModelConfig& config, const State& state);

/// -N(S) ||A^{theta'/4} v||^2, the exact dE/dt.
double DissipationRate(const ModelConfig& config, const State& state);

/// Time derivative of DissipationRate along the dynamics.
double DissipationRateDerivative(const ModelConfig& config,
                                 const State& state);

/// max_k |E(t_k) - E(0) - int_0^{t_k} D ds| / max(1, |E(0)|).
///
/// The integral is the composite trapezoid rule with the endpoint correction
/// h^2/12 (D'(t_0) - D'(t_k)), which is fourth order on uniform samples; D' is
/// evaluated exactly from the recorded states.
double EnergyIdentityResidual(const TrajectoryRecord& record);

/// Largest E(t_{k+1}) - E(t_k) over the record (<= 0 for monotone energy).
double MaxEnergyIncrease(const TrajectoryRecord& record);

/// E + eps ((v, y) + alpha (A^{theta/4} v, A^{theta/4} y)).
double PerturbedEnergy(const ModelConfig& config, const State& state,
                       double eps);

/// Largest eps for which 1/2 E - c <= E_eps <= 3/2 E + c with
/// c = (||h||^2 + L) / 2 is certified by Young's inequality and the lower
/// bound on E. Returns 0 when no threshold is certified for the instance.
double PerturbedEnergyThreshold(const ModelConfig& config);

/// (||h||^2 + L) / 2.
double PerturbedEnergyOffset(const ModelConfig& config);

/// E + (2/lambda_1)||h||^2 + l0 L - 1/4 ||z||^2; nonnegative when the lower
/// energy bound holds at the state.
double LowerBoundSlack(const ModelConfig& config, const State& state);

/// ||A^{1/2}v||^2 + ||a||^2 + alpha ||A^{theta/4}a||^2 + M(S)||A^{1/4}v||^2,
/// a = u_tt.
double SecondEnergy(const ModelConfig& config, const State& state);

/// Smallest C with log Q(t) - log Q(0) <= C t on the record, Q the second
/// energy. 0 when Q(0) = 0 and Q stays 0.
double SecondEnergyGrowthRate(const TrajectoryRecord& record);

/// Smallest C with E(t) <= 3 E(0) e^{-2 eps t / 3} + C on the record.
double FitPerturbedDecayConstant(const TrajectoryRecord& record, double eps);

struct DecayFit {
  double K1 = 0.0;
  double delta = 0.0;
  double K2 = 0.0;
  double rms = 0.0;
  /// Samples used by the log-linear regression.
  int points = 0;
};

/// Fits ||z(t)||^2 ~ K1 e^{-delta t} + K2.
///
/// K2 is the mean over the final quarter of the samples. The tail passes when
/// its standard deviation is at most 10% of max ||z||^2 - K2; otherwise
/// NonPlateau is thrown. (K1, delta) come from regressing
/// log(||z||^2 - K2) on t over the first three quarters, using samples where
/// ||z||^2 - K2 >= 10 K2 (and > 0). A record with no transient yields
/// K1 = delta = 0.
DecayFit FitDecay(std::span<const double> times,
                  std::span<const double> norm_squared);
DecayFit FitDecay(const TrajectoryRecord& record);

}  // namespace beam
