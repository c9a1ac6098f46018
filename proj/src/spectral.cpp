#include "beam/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "beam/errors.hpp"

namespace beam {

SpectralBasis::SpectralBasis(double length, int modes)
    : length_(length), modes_(modes) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("domain length must be positive and finite");
  }
  if (modes < 1) {
    throw std::invalid_argument("mode count must be a positive integer");
  }
  const double pi = std::numbers::pi;
  const int grid = 4 * (modes + 1);
  mu_.resize(modes);
  lambda_.resize(modes);
  for (int j = 1; j <= modes; ++j) {
    const double k = j * pi / length;
    mu_[j - 1] = k * k;
    lambda_[j - 1] = mu_[j - 1] * mu_[j - 1];
  }
  weight_ = length / grid;
  nodes_.resize(grid);
  for (int k = 0; k < grid; ++k) nodes_[k] = (k + 0.5) * weight_;

  const double amplitude = std::sqrt(2.0 / length);
  synthesis_.resize(grid, modes);
  for (int k = 0; k < grid; ++k) {
    // sin(j pi (k + 1/2) / P); reduce the integer argument first so large
    // mode counts keep full precision.
    for (int j = 1; j <= modes; ++j) {
      const long num = (static_cast<long>(j) * (2 * k + 1)) % (4L * grid);
      synthesis_(k, j - 1) = amplitude * std::sin(pi * num / (2.0 * grid));
    }
  }
}

void SpectralBasis::CheckModal(const ModalVector& y) const {
  if (y.size() != modes_) {
    throw DimensionMismatch("modal vector has " + std::to_string(y.size()) +
                            " entries, basis has " + std::to_string(modes_) +
                            " modes");
  }
}

GridVector SpectralBasis::ToGrid(const ModalVector& y) const {
  CheckModal(y);
  return synthesis_ * y;
}

ModalVector SpectralBasis::FromGrid(const GridVector& g) const {
  if (g.size() != grid_size()) {
    throw DimensionMismatch("grid vector has " + std::to_string(g.size()) +
                            " values, quadrature grid has " +
                            std::to_string(grid_size()));
  }
  return weight_ * (synthesis_.transpose() * g);
}

ModalVector ApplyFractionalPower(const SpectralBasis& basis, double s,
                                 const ModalVector& y) {
  basis.CheckModal(y);
  if (s == 0.0) return y;
  return basis.lambda().array().pow(s) * y.array();
}

double NormDsSquared(const SpectralBasis& basis, double s,
                     const ModalVector& y) {
  basis.CheckModal(y);
  if (s == 0.0) return y.squaredNorm();
  return (basis.lambda().array().pow(2.0 * s) * y.array().square()).sum();
}

double NormDs(const SpectralBasis& basis, double s, const ModalVector& y) {
  return std::sqrt(NormDsSquared(basis, s, y));
}

Eigen::VectorXd EvaluateField(const SpectralBasis& basis, const ModalVector& y,
                              std::span<const double> points) {
  basis.CheckModal(y);
  const double length = basis.length();
  const double amplitude = std::sqrt(2.0 / length);
  Eigen::VectorXd out(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i];
    if (!(x >= 0.0 && x <= length)) {
      throw std::out_of_range("evaluation point " + std::to_string(x) +
                              " outside [0, L]");
    }
    double sum = 0.0;
    for (int j = 1; j <= basis.modes(); ++j) {
      sum += y[j - 1] * std::sin(j * std::numbers::pi * x / length);
    }
    out[static_cast<Eigen::Index>(i)] = amplitude * sum;
  }
  return out;
}

ModalVector ProjectFunction(const SpectralBasis& basis,
                            const GridVector& grid_values) {
  return basis.FromGrid(grid_values);
}

}  // namespace beam
