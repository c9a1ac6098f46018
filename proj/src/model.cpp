#include "beam/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "beam/errors.hpp"

namespace beam {

ConstitutiveFunctions ConstitutiveFunctions::Polynomial(
    std::string name, const PolynomialCoefficients& c,
    const HypothesisConstants& k) {
  ConstitutiveFunctions out;
  out.name = std::move(name);
  out.M = [c](double s) { return c.m_b + c.m_a * s; };
  out.M_prime = [c](double) { return c.m_a; };
  out.M_tilde = [c](double s) { return c.m_b * s + 0.5 * c.m_a * s * s; };
  out.N = [c](double s) { return c.n_0 + c.n_1 * s; };
  out.N_prime = [c](double) { return c.n_1; };
  out.f = [c](double u) { return u * (c.f_1 + c.f_3 * u * u); };
  out.f_prime = [c](double u) { return c.f_1 + 3.0 * c.f_3 * u * u; };
  out.f_tilde = [c](double u) {
    const double u2 = u * u;
    return u2 * (0.5 * c.f_1 + 0.25 * c.f_3 * u2);
  };
  out.constants = k;
  out.source_vanishes = c.f_1 == 0.0 && c.f_3 == 0.0;
  return out;
}

namespace {

struct InstanceEntry {
  const char* name;
  NamedInstance instance;
};

const std::vector<InstanceEntry>& Instances() {
  // {m_a, m_b, n_0, n_1, f_1, f_3}, {sigma1, p, l0, l1, l2}
  static const std::vector<InstanceEntry> table = {
      {"wk-cubic", {{1, 1, 1, 0, 0, 1}, {3, 4, 0, 0, 0}}},
      {"wk-cubic-nonlocal", {{1, 1, 1, 1, 0, 1}, {3, 4, 0, 0, 0}}},
      {"wk-linear", {{1, 1, 1, 0, 1, 0}, {1, 4, 0, 0, 0}}},
      {"linear", {{0, 1, 1, 0, 0, 0}, {1, 4, 0, 0, 0}}},
      {"oscillator", {{0, 0, 1, 0, 0, 0}, {1, 4, 0, 0, 0}}},
      {"negative-m", {{0, -1, 1, 0, 0, 1}, {3, 4, 0, 0, 0}}},
  };
  return table;
}

}  // namespace

NamedInstance LookupInstance(std::string_view name) {
  for (const auto& entry : Instances()) {
    if (name == entry.name) return entry.instance;
  }
  throw std::invalid_argument("unknown instance '" + std::string(name) + "'");
}

std::vector<std::string> InstanceNames() {
  std::vector<std::string> names;
  for (const auto& entry : Instances()) names.emplace_back(entry.name);
  return names;
}

ModelConfig::ModelConfig(std::shared_ptr<const SpectralBasis> basis,
                         ConstitutiveFunctions constitutive, double alpha,
                         double theta, double theta_prime, ModalVector forcing)
    : basis_(std::move(basis)),
      constitutive_(std::move(constitutive)),
      alpha_(alpha),
      theta_(theta),
      theta_prime_(theta_prime),
      forcing_(std::move(forcing)) {
  if (!basis_) throw std::invalid_argument("model needs a spectral basis");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha out of range: requires 0 <= alpha <= 1");
  }
  if (!(theta >= 0.0 && theta_prime <= 1.0 && theta <= theta_prime)) {
    throw std::invalid_argument(
        "theta out of range: requires 0 <= theta <= theta' <= 1");
  }
  if (forcing_.size() == 0) forcing_ = ModalVector::Zero(basis_->modes());
  basis_->CheckModal(forcing_);
  const auto& lambda = basis_->lambda().array();
  inertia_weight_ = lambda.pow(0.5 * theta_);
  damping_weight_ = lambda.pow(0.5 * theta_prime_);
  mass_ = (1.0 + alpha_ * inertia_weight_.array()).matrix();
}

ModelConfig ModelConfig::WithAlpha(double alpha) const {
  return ModelConfig(basis_, constitutive_, alpha, theta_, theta_prime_,
                     forcing_);
}

ModelConfig ModelConfig::WithForcing(ModalVector forcing) const {
  return ModelConfig(basis_, constitutive_, alpha_, theta_, theta_prime_,
                     std::move(forcing));
}

State ZeroState(const ModelConfig& config) {
  return State{ModalVector::Zero(config.modes()),
               ModalVector::Zero(config.modes()), 0.0};
}

double Bulge(const ModelConfig& config, const ModalVector& y) {
  config.basis().CheckModal(y);
  return (config.sqrt_lambda().array() * y.array().square()).sum();
}

ModalVector NonlinearForce(const ModelConfig& config, const ModalVector& y) {
  const SpectralBasis& basis = config.basis();
  basis.CheckModal(y);
  if (config.constitutive().source_vanishes) {
    return ModalVector::Zero(basis.modes());
  }
  GridVector u = basis.ToGrid(y);
  const auto& f = config.constitutive().f;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    u[k] = f(u[k]);
    if (!std::isfinite(u[k])) throw DivergenceError(0, 0.0);
  }
  return basis.FromGrid(u);
}

ModalVector ForceBalance(const ModelConfig& config, const State& state) {
  config.basis().CheckModal(state.v);
  const double s = Bulge(config, state.y);
  const auto& c = config.constitutive();
  const ModalVector force = NonlinearForce(config, state.y);
  const auto& lambda = config.basis().lambda().array();
  return (config.forcing().array() - lambda * state.y.array() -
          c.M(s) * config.sqrt_lambda().array() * state.y.array() -
          c.N(s) * config.damping_weight().array() * state.v.array() -
          force.array())
      .matrix();
}

ModalVector Acceleration(const ModelConfig& config, const State& state) {
  return (ForceBalance(config, state).array() / config.mass().array())
      .matrix();
}

ModalVector StationaryResidual(const ModelConfig& config,
                               const ModalVector& y) {
  const double s = Bulge(config, y);
  const ModalVector force = NonlinearForce(config, y);
  const auto& lambda = config.basis().lambda().array();
  return (lambda * y.array() +
          config.constitutive().M(s) * config.sqrt_lambda().array() *
              y.array() +
          force.array() - config.forcing().array())
      .matrix();
}

Eigen::MatrixXd StationaryJacobian(const ModelConfig& config,
                                   const ModalVector& y) {
  const SpectralBasis& basis = config.basis();
  const auto& c = config.constitutive();
  const double s = Bulge(config, y);
  const Eigen::VectorXd weighted = config.sqrt_lambda().cwiseProduct(y);

  Eigen::MatrixXd jac = 2.0 * c.M_prime(s) * weighted * weighted.transpose();
  jac.diagonal() += basis.lambda() + c.M(s) * config.sqrt_lambda();
  if (!c.source_vanishes) {
    const GridVector u = basis.ToGrid(y);
    Eigen::VectorXd slope(u.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) slope[k] = c.f_prime(u[k]);
    const Eigen::MatrixXd& phi = basis.synthesis();
    jac += basis.weight() * phi.transpose() * slope.asDiagonal() * phi;
  }
  return jac;
}

bool HypothesisReport::AllPassed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return c.passed; });
}

const HypothesisCheck& HypothesisReport::Find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no hypothesis named '" + std::string(name) + "'");
}

namespace {

// Records lhs <= rhs at one sample, allowing for rounding in both sides.
void Require(HypothesisCheck& check, double at, double lhs, double rhs) {
  const double slack = 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  const double excess = lhs - rhs;
  if (!(excess <= slack)) {
    if (check.passed) check.first_violation = at;
    check.passed = false;
    check.worst_excess = std::isfinite(excess)
                             ? std::max(check.worst_excess, excess)
                             : excess;
  }
}

}  // namespace

HypothesisReport VerifyHypotheses(const ModelConfig& config, double tau_max,
                                  double u_max, int samples) {
  if (!(tau_max > 0.0) || !(u_max > 0.0)) {
    throw std::invalid_argument("sample ranges must be positive");
  }
  if (samples < 100) {
    throw std::invalid_argument("at least 100 samples are required");
  }
  const auto& c = config.constitutive();
  const auto& k = c.constants;
  const double lambda1 = config.basis().lambda1();

  HypothesisCheck h1, h2, h3, h4, lower;
  h1.name = "H1";
  h2.name = "H2";
  h3.name = "H3";
  h4.name = "H4";
  lower.name = "f-lower";

  for (int i = 0; i < samples; ++i) {
    const double tau = tau_max * i / (samples - 1);
    // M >= 0 and N > 0; N > 0 is tested as -N < 0 with no slack.
    Require(h1, tau, -c.M(tau), 0.0);
    if (!(c.N(tau) > 0.0)) {
      if (h1.passed) h1.first_violation = tau;
      h1.passed = false;
    }
    Require(h4, tau, c.M_tilde(tau),
            2.0 * c.M(tau) * tau + 0.25 * std::sqrt(lambda1) * tau +
                2.0 * k.l2);
  }

  if (!(k.sigma1 > 0.0) || !(k.p > 0.0)) {
    h2.passed = false;
    h2.first_violation = 0.0;
  }
  Require(h2, 0.0, std::abs(c.f(0.0)), 0.0);
  for (int i = 0; i < samples; ++i) {
    const double u = -u_max + 2.0 * u_max * i / (samples - 1);
    const double u2 = u * u;
    Require(h2, u, std::abs(c.f_prime(u)),
            k.sigma1 * (1.0 + std::pow(std::abs(u), 0.5 * k.p)));
    Require(h3, u, c.f_tilde(u), c.f(u) * u + 0.125 * lambda1 * u2 + k.l1);
    Require(lower, u, -0.125 * lambda1 * u2 - k.l0, c.f_tilde(u));
  }

  HypothesisReport report;
  report.checks = {h1, h2, h3, h4, lower};
  return report;
}

}  // namespace beam
