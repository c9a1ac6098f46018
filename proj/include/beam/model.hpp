#pragma once

// Extensible beam with fractional rotational inertia in modal form:
//
//   (1 + alpha A^{theta/2}) u_tt + A u + M(S) A^{1/2} u
//       + N(S) A^{theta'/2} u_t + f(u) = h,      S = ||A^{1/4} u||^2.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beam/spectral.hpp"

namespace beam {

/// Coefficients of the polynomial constitutive family shipped with the
/// toolkit: M(s) = m_b + m_a s, N(s) = n_0 + n_1 s, f(u) = f_1 u + f_3 u^3.
struct PolynomialCoefficients {
  double m_a = 0.0;
  double m_b = 0.0;
  double n_0 = 1.0;
  double n_1 = 0.0;
  double f_1 = 0.0;
  double f_3 = 0.0;

  bool operator==(const PolynomialCoefficients&) const = default;
};

/// Constants the hypotheses are stated with. They are declared by each
/// instance, never inferred.
struct HypothesisConstants {
  double sigma1 = 1.0;
  double p = 4.0;
  double l0 = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;

  bool operator==(const HypothesisConstants&) const = default;
};

/// Scalar nonlinearities M, N, f with the derivatives and antiderivatives the
/// energy functionals and Newton solver need.
struct ConstitutiveFunctions {
  using Scalar = std::function<double(double)>;

  std::string name;
  Scalar M, M_prime, M_tilde;
  Scalar N, N_prime;
  Scalar f, f_prime, f_tilde;
  HypothesisConstants constants;
  /// True when f vanishes identically; lets callers skip grid transforms.
  bool source_vanishes = false;

  static ConstitutiveFunctions Polynomial(std::string name,
                                          const PolynomialCoefficients& c,
                                          const HypothesisConstants& k);
};

/// Coefficients and declared constants of a named built-in instance:
///   wk-cubic           M = 1 + s, N = 1,     f = u^3
///   wk-cubic-nonlocal  M = 1 + s, N = 1 + s, f = u^3
///   wk-linear          M = 1 + s, N = 1,     f = u
///   linear             M = 1,     N = 1,     f = 0
///   oscillator         M = 0,     N = 1,     f = 0
///   negative-m         M = -1,    N = 1,     f = u^3   (violates H1)
/// Throws std::invalid_argument for an unknown name.
struct NamedInstance {
  PolynomialCoefficients coefficients;
  HypothesisConstants constants;
};
NamedInstance LookupInstance(std::string_view name);
std::vector<std::string> InstanceNames();

/// Coefficients of u, u_t in the Galerkin system (alpha, theta, theta', basis,
/// nonlinearities, forcing). Immutable after construction; per-mode weights
/// are cached.
class ModelConfig {
 public:
  /// Throws std::invalid_argument unless 0 <= alpha <= 1 and
  /// 0 <= theta <= theta' <= 1, and DimensionMismatch for a forcing of the
  /// wrong length.
  ModelConfig(std::shared_ptr<const SpectralBasis> basis,
              ConstitutiveFunctions constitutive, double alpha, double theta,
              double theta_prime, ModalVector forcing);

  /// Same model with a different rotational-inertia strength.
  ModelConfig WithAlpha(double alpha) const;
  ModelConfig WithForcing(ModalVector forcing) const;

  const SpectralBasis& basis() const { return *basis_; }
  const std::shared_ptr<const SpectralBasis>& basis_ptr() const {
    return basis_;
  }
  const ConstitutiveFunctions& constitutive() const { return constitutive_; }
  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  double theta_prime() const { return theta_prime_; }
  const ModalVector& forcing() const { return forcing_; }
  int modes() const { return basis_->modes(); }

  /// 1 + alpha lambda_j^{theta/2}, always >= 1.
  const Eigen::VectorXd& mass() const { return mass_; }
  /// lambda_j^{1/2} = mu_j.
  const Eigen::VectorXd& sqrt_lambda() const { return basis_->mu(); }
  /// lambda_j^{theta/2}.
  const Eigen::VectorXd& inertia_weight() const { return inertia_weight_; }
  /// lambda_j^{theta'/2}.
  const Eigen::VectorXd& damping_weight() const { return damping_weight_; }

 private:
  std::shared_ptr<const SpectralBasis> basis_;
  ConstitutiveFunctions constitutive_;
  double alpha_;
  double theta_;
  double theta_prime_;
  ModalVector forcing_;
  Eigen::VectorXd mass_;
  Eigen::VectorXd inertia_weight_;
  Eigen::VectorXd damping_weight_;
};

/// Phase-space point z = (u, u_t) at time t.
struct State {
  ModalVector y;
  ModalVector v;
  double t = 0.0;
};

State ZeroState(const ModelConfig& config);

/// S = ||A^{1/4} u||^2 = sum mu_j y_j^2.
double Bulge(const ModelConfig& config, const ModalVector& y);

/// Modal coefficients of f(u), evaluated pointwise on the quadrature grid.
/// Throws DivergenceError if f overflows.
ModalVector NonlinearForce(const ModelConfig& config, const ModalVector& y);

/// The right-hand side h - A y - M(S) A^{1/2} y - N(S) A^{theta'/2} v - F(y),
/// before division by the modal mass.
ModalVector ForceBalance(const ModelConfig& config, const State& state);

/// u_tt of the Galerkin system.
ModalVector Acceleration(const ModelConfig& config, const State& state);

/// G(y) = A y + M(S) A^{1/2} y + F(y) - h; its zeros are the stationary
/// points.
ModalVector StationaryResidual(const ModelConfig& config, const ModalVector& y);

/// Dense Jacobian of StationaryResidual.
Eigen::MatrixXd StationaryJacobian(const ModelConfig& config,
                                   const ModalVector& y);

struct HypothesisCheck {
  std::string name;
  bool passed = true;
  /// First sample (tau or u) at which the inequality failed.
  std::optional<double> first_violation;
  /// Largest amount by which the left side exceeded the right side.
  double worst_excess = 0.0;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  bool AllPassed() const;
  const HypothesisCheck& Find(std::string_view name) const;
};

/// Samples (H1)-(H4), f(0) = 0 and the lower bound on f~ on uniform grids over
/// [0, tau_max] and [-u_max, u_max]. Failures are reported, not thrown.
HypothesisReport VerifyHypotheses(const ModelConfig& config, double tau_max,
                                  double u_max, int samples);

}  // namespace beam
