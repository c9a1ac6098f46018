#include "beam/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "beam/errors.hpp"
#include "beam/regression.hpp"
#include "beam/stability.hpp"

namespace beam {

double Energy(const ModelConfig& config, const State& state) {
  const SpectralBasis& basis = config.basis();
  basis.CheckModal(state.y);
  basis.CheckModal(state.v);
  const auto& c = config.constitutive();
  const double s = Bulge(config, state.y);
  const double quadratic =
      (basis.lambda().array() * state.y.array().square()).sum() +
      (config.mass().array() * state.v.array().square()).sum();
  double potential = 0.0;
  if (!c.source_vanishes) {
    GridVector u = basis.ToGrid(state.y);
    for (Eigen::Index k = 0; k < u.size(); ++k) u[k] = c.f_tilde(u[k]);
    potential = basis.Integrate(u);
  }
  return 0.5 * (quadratic + c.M_tilde(s)) + potential -
         config.forcing().dot(state.y);
}

double DissipationRate(const ModelConfig& config, const State& state) {
  config.basis().CheckModal(state.v);
  const double s = Bulge(config, state.y);
  return -config.constitutive().N(s) *
         (config.damping_weight().array() * state.v.array().square()).sum();
}

double DissipationRateDerivative(const ModelConfig& config,
                                 const State& state) {
  const auto& c = config.constitutive();
  const double s = Bulge(config, state.y);
  const double s_dot =
      2.0 * (config.sqrt_lambda().array() * state.y.array() * state.v.array())
                .sum();
  const ModalVector a = Acceleration(config, state);
  const auto d = config.damping_weight().array();
  return -c.N_prime(s) * s_dot * (d * state.v.array().square()).sum() -
         2.0 * c.N(s) * (d * state.v.array() * a.array()).sum();
}

double EnergyIdentityResidual(const TrajectoryRecord& record) {
  const std::size_t n = record.size();
  if (n < 2) throw std::invalid_argument("energy identity needs two samples");
  const double e0 = record.energy.front();
  const double scale = std::max(1.0, std::abs(e0));
  double prev_slope = DissipationRateDerivative(record.config, record.states[0]);
  double integral = 0.0;
  double worst = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double h = record.states[k].t - record.states[k - 1].t;
    const double slope =
        DissipationRateDerivative(record.config, record.states[k]);
    integral += 0.5 * h * (record.dissipation[k - 1] + record.dissipation[k]) +
                h * h / 12.0 * (prev_slope - slope);
    prev_slope = slope;
    worst = std::max(worst, std::abs(record.energy[k] - e0 - integral));
  }
  return worst / scale;
}

double MaxEnergyIncrease(const TrajectoryRecord& record) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < record.size(); ++k) {
    worst = std::max(worst, record.energy[k] - record.energy[k - 1]);
  }
  return record.size() < 2 ? 0.0 : worst;
}

double PerturbedEnergy(const ModelConfig& config, const State& state,
                       double eps) {
  const double psi =
      (config.mass().array() * state.v.array() * state.y.array()).sum();
  return Energy(config, state) + eps * psi;
}

double PerturbedEnergyOffset(const ModelConfig& config) {
  return 0.5 * (config.forcing().squaredNorm() + config.basis().length());
}

double PerturbedEnergyThreshold(const ModelConfig& config) {
  const double lambda1 = config.basis().lambda1();
  const double l0 = config.constitutive().constants.l0;
  const double margin = (1.0 - 2.0 / lambda1) * config.forcing().squaredNorm() +
                        (1.0 - l0) * config.basis().length();
  if (margin < 0.0) return 0.0;
  const double c = std::max(
      1.0, 1.0 / lambda1 + std::pow(lambda1, 0.5 * config.theta() - 1.0));
  return 0.25 / c;
}

double LowerBoundSlack(const ModelConfig& config, const State& state) {
  const auto& k = config.constitutive().constants;
  return Energy(config, state) +
         2.0 / config.basis().lambda1() * config.forcing().squaredNorm() +
         k.l0 * config.basis().length() -
         0.25 * PhaseNormSquared(config, state);
}

double SecondEnergy(const ModelConfig& config, const State& state) {
  const ModalVector a = SecondTimeDerivative(config, state);
  const double s = Bulge(config, state.y);
  const auto v2 = state.v.array().square();
  return (config.basis().lambda().array() * v2).sum() +
         (config.mass().array() * a.array().square()).sum() +
         config.constitutive().M(s) * (config.sqrt_lambda().array() * v2).sum();
}

double SecondEnergyGrowthRate(const TrajectoryRecord& record) {
  const double q0 = SecondEnergy(record.config, record.states.front());
  const double t0 = record.states.front().t;
  double rate = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 1; k < record.size(); ++k) {
    const double q = SecondEnergy(record.config, record.states[k]);
    if (q == 0.0) continue;
    if (q0 == 0.0) return std::numeric_limits<double>::infinity();
    rate = std::max(rate,
                    (std::log(q) - std::log(q0)) / (record.states[k].t - t0));
    any = true;
  }
  return any ? rate : 0.0;
}

double FitPerturbedDecayConstant(const TrajectoryRecord& record, double eps) {
  const double e0 = record.energy.front();
  const double t0 = record.states.front().t;
  double c = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < record.size(); ++k) {
    const double t = record.states[k].t - t0;
    c = std::max(c, record.energy[k] - 3.0 * e0 * std::exp(-2.0 * eps * t / 3.0));
  }
  return c;
}

DecayFit FitDecay(std::span<const double> times,
                  std::span<const double> norm_squared) {
  const std::size_t n = times.size();
  if (n != norm_squared.size()) {
    throw std::invalid_argument("decay fit inputs differ in length");
  }
  if (n < 8) throw std::invalid_argument("decay fit needs at least 8 samples");

  const std::size_t tail_begin = n - n / 4;
  double k2 = 0.0;
  for (std::size_t k = tail_begin; k < n; ++k) k2 += norm_squared[k];
  k2 /= static_cast<double>(n - tail_begin);
  double var = 0.0;
  for (std::size_t k = tail_begin; k < n; ++k) {
    var += (norm_squared[k] - k2) * (norm_squared[k] - k2);
  }
  const double tail_std = std::sqrt(var / static_cast<double>(n - tail_begin));
  const double peak =
      *std::max_element(norm_squared.begin(), norm_squared.end());
  if (tail_std > 0.1 * (peak - k2)) {
    throw NonPlateau("tail of ||z||^2 has not settled (std " +
                     std::to_string(tail_std) + ", drop " +
                     std::to_string(peak - k2) + "); run longer");
  }

  DecayFit fit;
  fit.K2 = k2;
  std::vector<double> x, y;
  const std::size_t transient_end = (3 * n) / 4;
  for (std::size_t k = 0; k < transient_end; ++k) {
    const double excess = norm_squared[k] - k2;
    if (excess > 0.0 && excess >= 10.0 * k2) {
      x.push_back(times[k] - times[0]);
      y.push_back(std::log(excess));
    }
  }
  fit.points = static_cast<int>(x.size());
  if (x.size() < 2 || x.front() == x.back()) return fit;
  const LineFit line = FitLine(x, y);
  fit.K1 = std::exp(line.intercept);
  fit.delta = -line.slope;
  fit.rms = line.rms;
  return fit;
}

DecayFit FitDecay(const TrajectoryRecord& record) {
  std::vector<double> sq;
  sq.reserve(record.size());
  for (double p : record.phase_norm) sq.push_back(p * p);
  const std::vector<double> t = record.times();
  return FitDecay(t, sq);
}

}  // namespace beam
