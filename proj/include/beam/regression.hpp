#pragma once

#include <span>

namespace beam {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the fit.
  double rms = 0.0;
};

/// Ordinary least squares y ~ intercept + slope x. Throws
/// std::invalid_argument for fewer than two points, mismatched lengths or
/// constant x.
LineFit FitLine(std::span<const double> x, std::span<const double> y);

}  // namespace beam
