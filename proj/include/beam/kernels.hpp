#pragma once

// Parallel kernels and their serial references. Each pair returns identical
// results; the serial versions are kept for tests and the benchmark.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "beam/integrator.hpp"

namespace beam::kernels {

/// Worker count for parallel regions: the OpenMP default, capped by
/// BEAM_ATTRACTOR_THREADS when that holds a positive integer.
int WorkerCount();

/// sup over rows a of A of min over rows b of B of |a - b| (Euclidean).
/// Throws std::invalid_argument for an empty set or differing widths.
double HausdorffSemidistanceSerial(const Eigen::MatrixXd& a,
                                   const Eigen::MatrixXd& b);
double HausdorffSemidistanceParallel(const Eigen::MatrixXd& a,
                                     const Eigen::MatrixXd& b);

struct EnsembleMember {
  ModelConfig config;
  State initial;
  IntegrationSettings settings;
};

/// Integrates every member. When members fail, all others still finish and
/// the failure of the lowest-indexed member is rethrown.
std::vector<TrajectoryRecord> RunEnsembleSerial(
    const std::vector<EnsembleMember>& members);
std::vector<TrajectoryRecord> RunEnsembleParallel(
    const std::vector<EnsembleMember>& members);

}  // namespace beam::kernels
