#pragma once

// Sine eigenbasis of the hinged beam operator on [0, L].
//
// The Dirichlet Laplacian has eigenpairs mu_j = (j pi / L)^2 with
// omega_j(x) = sqrt(2/L) sin(j pi x / L); the biharmonic operator A = Delta^2
// with hinged ends (u = u_xx = 0) shares the eigenfunctions with
// lambda_j = mu_j^2. Every fractional power A^s is diagonal in this basis.
//
// Physical-space work uses P = 4(m+1) midpoint nodes x_k = (k + 1/2) L / P with
// equal weights L / P. The midpoint rule integrates cos(n pi x / L) exactly
// for 0 < n < 2P, so products of up to eight basis modes are integrated
// without aliasing.

#include <span>

#include <Eigen/Dense>

namespace beam {

/// Coefficients in the orthonormal eigenbasis, mode j stored at index j-1.
using ModalVector = Eigen::VectorXd;

/// Field values on the quadrature grid.
using GridVector = Eigen::VectorXd;

class SpectralBasis {
 public:
  /// Throws std::invalid_argument for non-positive length or mode count.
  SpectralBasis(double length, int modes);

  double length() const { return length_; }
  int modes() const { return modes_; }
  int grid_size() const { return static_cast<int>(nodes_.size()); }

  /// Eigenvalues of -Delta, strictly increasing.
  const Eigen::VectorXd& mu() const { return mu_; }
  /// Eigenvalues of A = Delta^2, lambda_j = mu_j^2.
  const Eigen::VectorXd& lambda() const { return lambda_; }
  double lambda1() const { return lambda_[0]; }

  const Eigen::VectorXd& nodes() const { return nodes_; }
  double weight() const { return weight_; }

  /// P x m matrix of omega_j(x_k).
  const Eigen::MatrixXd& synthesis() const { return synthesis_; }

  /// Field values u(x_k) of the modal vector on the quadrature grid.
  GridVector ToGrid(const ModalVector& y) const;

  /// Discrete inner products (g, omega_j) from grid values.
  ModalVector FromGrid(const GridVector& g) const;

  /// Quadrature of grid values over [0, L].
  double Integrate(const GridVector& g) const { return weight_ * g.sum(); }

  void CheckModal(const ModalVector& y) const;

 private:
  double length_;
  int modes_;
  Eigen::VectorXd mu_;
  Eigen::VectorXd lambda_;
  Eigen::VectorXd nodes_;
  double weight_;
  Eigen::MatrixXd synthesis_;
};

/// (A^s y)_j = lambda_j^s y_j.
ModalVector ApplyFractionalPower(const SpectralBasis& basis, double s,
                                 const ModalVector& y);

/// ||A^s u||_2. s = 0 is the L2 norm, s = 1/4 the H^1_0 seminorm and s = 1/2
/// the norm ||Delta u||.
double NormDs(const SpectralBasis& basis, double s, const ModalVector& y);

/// Squared ||A^s u||_2, without the final square root.
double NormDsSquared(const SpectralBasis& basis, double s, const ModalVector& y);

/// Sine-series synthesis at arbitrary points of [0, L]. Throws
/// std::out_of_range for points outside the domain.
Eigen::VectorXd EvaluateField(const SpectralBasis& basis, const ModalVector& y,
                              std::span<const double> points);

/// Inverse of sampling on the quadrature grid: coefficient j approximates
/// the integral of g omega_j. Exact for band-limited g of degree < 2P - m.
ModalVector ProjectFunction(const SpectralBasis& basis,
                            const GridVector& grid_values);

}  // namespace beam
