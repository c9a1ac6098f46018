#include "beam/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "beam/energy.hpp"
#include "beam/stability.hpp"

namespace beam {

std::string_view SchemeName(Scheme scheme) {
  return scheme == Scheme::kRk4 ? "rk4" : "imex";
}

Scheme ParseScheme(std::string_view name) {
  if (name == "rk4") return Scheme::kRk4;
  if (name == "imex") return Scheme::kImex;
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected rk4 or imex)");
}

Scheme DefaultScheme(int modes) {
  return modes > 64 ? Scheme::kImex : Scheme::kRk4;
}

double StabilityBound(const ModelConfig& config, const State& state) {
  const auto& c = config.constitutive();
  const double s = Bulge(config, state.y);
  const double m_s = c.M(s);
  const double n_s = c.N(s);
  double largest = 0.0;
  for (int j = 0; j < config.modes(); ++j) {
    const double mass = config.mass()[j];
    const double k = config.basis().lambda()[j] + m_s * config.sqrt_lambda()[j];
    const double damp = n_s * config.damping_weight()[j];
    const double disc = damp * damp - 4.0 * mass * k;
    double modulus;
    if (disc < 0.0) {
      modulus = std::sqrt(k / mass);
    } else {
      modulus = (std::abs(damp) + std::sqrt(disc)) / (2.0 * mass);
    }
    largest = std::max(largest, modulus);
  }
  if (!(largest > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.8 / largest;
}

double AutoTimeStep(const ModelConfig& config, const State& state) {
  return 0.5 * StabilityBound(config, state);
}

namespace {

void CheckFinite(const State& state) {
  for (Eigen::Index j = 0; j < state.y.size(); ++j) {
    if (!std::isfinite(state.y[j]) || !std::isfinite(state.v[j])) {
      throw DivergenceError(static_cast<int>(j) + 1, state.t);
    }
  }
}

}  // namespace

Stepper::Stepper(const ModelConfig& config, Scheme scheme, double dt)
    : config_(config), scheme_(scheme), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("time step must be positive and finite");
  }
}

State Stepper::Step(const State& state) {
  config_.basis().CheckModal(state.y);
  config_.basis().CheckModal(state.v);
  State next;
  try {
    next = scheme_ == Scheme::kRk4 ? StepRk4(state) : StepImex(state);
  } catch (const DivergenceError& e) {
    if (e.mode() == 0) throw DivergenceError(0, state.t + dt_);
    throw;
  }
  next.t = state.t + dt_;
  CheckFinite(next);
  return next;
}

State Stepper::StepRk4(const State& s0) const {
  const double h = dt_;
  auto accel = [this](const ModalVector& y, const ModalVector& v) {
    return Acceleration(config_, State{y, v, 0.0});
  };
  const ModalVector k1y = s0.v;
  const ModalVector k1v = accel(s0.y, s0.v);
  const ModalVector y2 = s0.y + 0.5 * h * k1y;
  const ModalVector v2 = s0.v + 0.5 * h * k1v;
  const ModalVector k2y = v2;
  const ModalVector k2v = accel(y2, v2);
  const ModalVector y3 = s0.y + 0.5 * h * k2y;
  const ModalVector v3 = s0.v + 0.5 * h * k2v;
  const ModalVector k3y = v3;
  const ModalVector k3v = accel(y3, v3);
  const ModalVector y4 = s0.y + h * k3y;
  const ModalVector v4 = s0.v + h * k3v;
  const ModalVector k4y = v4;
  const ModalVector k4v = accel(y4, v4);
  State out;
  out.y = s0.y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
  out.v = s0.v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  return out;
}

void Stepper::Rebuild(double s) {
  const auto& c = config_.constitutive();
  frozen_s_ = s;
  frozen_m_ = c.M(s);
  frozen_n_ = c.N(s);
  const int m = config_.modes();
  prop_.resize(m, 4);
  phi1_.resize(m, 2);
  phi2_.resize(m, 2);
  for (int j = 0; j < m; ++j) {
    const double mass = config_.mass()[j];
    const double k =
        config_.basis().lambda()[j] + frozen_m_ * config_.sqrt_lambda()[j];
    const double damp = frozen_n_ * config_.damping_weight()[j];
    // exp([[Lh, e2, 0], [0, 0, 1], [0, 0, 0]]) holds e^{Lh}, phi_1(Lh) e2 and
    // phi_2(Lh) e2 in its first two rows.
    Eigen::Matrix4d aug = Eigen::Matrix4d::Zero();
    aug(0, 1) = dt_;
    aug(1, 0) = -dt_ * k / mass;
    aug(1, 1) = -dt_ * damp / mass;
    aug(1, 2) = 1.0;
    aug(2, 3) = 1.0;
    const Eigen::Matrix4d e = aug.exp();
    prop_.row(j) << e(0, 0), e(0, 1), e(1, 0), e(1, 1);
    phi1_.row(j) << dt_ * e(0, 2) / mass, dt_ * e(1, 2) / mass;
    phi2_.row(j) << dt_ * e(0, 3) / mass, dt_ * e(1, 3) / mass;
  }
  built_ = true;
  ++rebuilds_;
}

ModalVector Stepper::Residual(const ModalVector& y,
                              const ModalVector& v) const {
  const auto& c = config_.constitutive();
  const double s = Bulge(config_, y);
  const ModalVector force = NonlinearForce(config_, y);
  return (config_.forcing().array() - force.array() -
          (c.M(s) - frozen_m_) * config_.sqrt_lambda().array() * y.array() -
          (c.N(s) - frozen_n_) * config_.damping_weight().array() * v.array())
      .matrix();
}

State Stepper::StepImex(const State& s0) {
  const double s = Bulge(config_, s0.y);
  if (!built_) {
    Rebuild(s);
  } else if (std::abs(s - frozen_s_) > 0.01 * frozen_s_ + 1e-12) {
    const auto& c = config_.constitutive();
    if (c.M(s) != frozen_m_ || c.N(s) != frozen_n_) Rebuild(s);
  }
  const ModalVector r0 = Residual(s0.y, s0.v);
  const auto p = prop_.array();
  State a;
  a.y = (p.col(0) * s0.y.array() + p.col(1) * s0.v.array() +
         phi1_.array().col(0) * r0.array())
            .matrix();
  a.v = (p.col(2) * s0.y.array() + p.col(3) * s0.v.array() +
         phi1_.array().col(1) * r0.array())
            .matrix();
  const ModalVector dr = Residual(a.y, a.v) - r0;
  State out;
  out.y = a.y + phi2_.col(0).cwiseProduct(dr);
  out.v = a.v + phi2_.col(1).cwiseProduct(dr);
  return out;
}

State Step(const ModelConfig& config, const State& state, double dt,
           Scheme scheme) {
  Stepper stepper(config, scheme, dt);
  return stepper.Step(state);
}

ModalVector SecondTimeDerivative(const ModelConfig& config,
                                 const State& state) {
  return Acceleration(config, state);
}

std::vector<double> TrajectoryRecord::times() const {
  std::vector<double> t;
  t.reserve(states.size());
  for (const auto& s : states) t.push_back(s.t);
  return t;
}

namespace {

void Append(TrajectoryRecord& record, const State& state,
            const std::vector<Observer>& observers) {
  record.states.push_back(state);
  record.energy.push_back(Energy(record.config, state));
  record.dissipation.push_back(DissipationRate(record.config, state));
  record.phase_norm.push_back(PhaseNorm(record.config, state));
  std::vector<double> values;
  values.reserve(observers.size());
  for (const auto& o : observers) values.push_back(o.evaluate(record.config, state));
  record.observer_values.push_back(std::move(values));
}

}  // namespace

TrajectoryRecord Integrate(const ModelConfig& config, const State& state0,
                           const IntegrationSettings& settings,
                           const std::vector<Observer>& observers) {
  if (!(settings.T >= 0.0) || !std::isfinite(settings.T)) {
    throw std::invalid_argument("final time must be nonnegative and finite");
  }
  if (!(settings.dt > 0.0)) {
    throw std::invalid_argument("time step must be positive");
  }
  if (settings.stride < 1) {
    throw std::invalid_argument("stride must be at least 1");
  }
  config.basis().CheckModal(state0.y);
  config.basis().CheckModal(state0.v);

  TrajectoryRecord record(config);
  record.scheme = settings.scheme;
  record.stride = settings.stride;
  for (const auto& o : observers) record.observer_names.push_back(o.name);

  const long n = settings.T > 0.0
                     ? static_cast<long>(
                           std::ceil(settings.T / settings.dt - 1e-9))
                     : 0;
  const double h = n > 0 ? settings.T / n : settings.dt;
  record.dt = h;
  Append(record, state0, observers);
  if (n == 0) return record;

  Stepper stepper(config, settings.scheme, h);
  State state = state0;
  try {
    for (long k = 1; k <= n; ++k) {
      state = stepper.Step(state);
      state.t = state0.t + k * h;
      record.steps = k;
      if (k % settings.stride == 0 || k == n) Append(record, state, observers);
    }
  } catch (const DivergenceError& e) {
    record.diverged = true;
    record.divergence_message = e.what();
    throw TrajectoryDiverged(
        e, std::make_shared<const TrajectoryRecord>(std::move(record)));
  }
  return record;
}

}  // namespace beam
