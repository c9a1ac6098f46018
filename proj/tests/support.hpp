#pragma once

// Independent oracles and small builders shared by the unit tests.

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>

#include "beam/model.hpp"
#include "beam/random.hpp"

namespace beam::testing {

inline ModelConfig MakeModel(const PolynomialCoefficients& c, int modes,
                             double alpha = 0.0, double theta = 1.0,
                             double theta_prime = 1.0,
                             ModalVector forcing = {},
                             double length = std::numbers::pi,
                             HypothesisConstants k = {}) {
  auto basis = std::make_shared<const SpectralBasis>(length, modes);
  return ModelConfig(basis, ConstitutiveFunctions::Polynomial("test", c, k),
                     alpha, theta, theta_prime, std::move(forcing));
}

inline ModelConfig MakeNamed(const std::string& name, int modes,
                             double alpha = 0.0, ModalVector forcing = {}) {
  const NamedInstance inst = LookupInstance(name);
  return MakeModel(inst.coefficients, modes, alpha, 1.0, 1.0,
                   std::move(forcing), std::numbers::pi, inst.constants);
}

/// M = b, N = nu, f = 0.
inline PolynomialCoefficients Linear(double b, double nu) {
  PolynomialCoefficients c;
  c.m_b = b;
  c.n_0 = nu;
  return c;
}

inline ModalVector Unit(int modes, int j) {
  ModalVector e = ModalVector::Zero(modes);
  e[j - 1] = 1.0;
  return e;
}

inline ModalVector RandomVector(int modes, std::uint64_t seed,
                                double scale = 1.0) {
  SplitMix64 rng(seed);
  ModalVector y(modes);
  for (int j = 0; j < modes; ++j) y[j] = scale * rng.Uniform(-1.0, 1.0);
  return y;
}

/// Adaptive Simpson quadrature with Richardson correction on each of
/// `panels` equal subintervals (guards against integrands that vanish at the
/// first few nodes).
inline double AdaptiveSimpson(const std::function<double(double)>& f, double a,
                              double b, double tol, int depth = 50,
                              int panels = 37);

inline double AdaptiveSimpsonPanel(const std::function<double(double)>& f,
                                   double a, double b, double tol, int depth) {
  struct Rec {
    const std::function<double(double)>& f;
    double Run(double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
      }
      return Run(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             Run(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec{f}.Run(a, b, fa, fm, fb, whole, tol, depth);
}

inline double AdaptiveSimpson(const std::function<double(double)>& f, double a,
                              double b, double tol, int depth, int panels) {
  double sum = 0.0;
  const double w = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    sum += AdaptiveSimpsonPanel(f, a + i * w, a + (i + 1) * w, tol / panels,
                                depth);
  }
  return sum;
}

/// Sine-series synthesis at one point, written independently of the library.
inline double SineSeries(const ModalVector& y, double length, double x) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    sum += y[j] * std::sin((j + 1) * std::numbers::pi * x / length);
  }
  return std::sqrt(2.0 / length) * sum;
}

/// Closed-form solution of mass y'' + c y' + k y = 0 (underdamped).
struct DampedOscillator {
  double mass, c, k, y0, v0;

  double Rate() const { return -c / (2.0 * mass); }
  double Frequency() const {
    return std::sqrt(k / mass - Rate() * Rate());
  }
  double Position(double t) const {
    const double r = Rate(), w = Frequency();
    return std::exp(r * t) *
           (y0 * std::cos(w * t) + (v0 - r * y0) / w * std::sin(w * t));
  }
  double Velocity(double t) const {
    const double r = Rate(), w = Frequency();
    const double a = y0, b = (v0 - r * y0) / w;
    return std::exp(r * t) * ((r * a + w * b) * std::cos(w * t) +
                              (r * b - w * a) * std::sin(w * t));
  }
};

}  // namespace beam::testing
