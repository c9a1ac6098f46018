#include "beam/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>

namespace beam::kernels {

int WorkerCount() {
  int workers = omp_get_max_threads();
  if (const char* env = std::getenv("BEAM_ATTRACTOR_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) {
      workers = std::min<long>(workers, cap);
    }
  }
  return std::max(workers, 1);
}

namespace {

void CheckClouds(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() == 0 || b.rows() == 0) {
    throw std::invalid_argument("Hausdorff semidistance of an empty cloud");
  }
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("point clouds have different dimensions");
  }
}

double NearestSquared(const Eigen::MatrixXd& b, const Eigen::MatrixXd& a,
                      Eigen::Index i) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    best = std::min(best, (a.row(i) - b.row(j)).squaredNorm());
  }
  return best;
}

}  // namespace

double HausdorffSemidistanceSerial(const Eigen::MatrixXd& a,
                                   const Eigen::MatrixXd& b) {
  CheckClouds(a, b);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    worst = std::max(worst, NearestSquared(b, a, i));
  }
  return std::sqrt(worst);
}

double HausdorffSemidistanceParallel(const Eigen::MatrixXd& a,
                                     const Eigen::MatrixXd& b) {
  CheckClouds(a, b);
  const Eigen::Index n = a.rows();
  double worst = 0.0;
#pragma omp parallel for num_threads(WorkerCount()) reduction(max : worst) \
    schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    worst = std::max(worst, NearestSquared(b, a, i));
  }
  return std::sqrt(worst);
}

namespace {

std::vector<TrajectoryRecord> Collect(
    std::vector<std::optional<TrajectoryRecord>>& slots,
    std::vector<std::exception_ptr>& errors) {
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<TrajectoryRecord> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace

std::vector<TrajectoryRecord> RunEnsembleSerial(
    const std::vector<EnsembleMember>& members) {
  std::vector<std::optional<TrajectoryRecord>> slots(members.size());
  std::vector<std::exception_ptr> errors(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    try {
      slots[i].emplace(Integrate(members[i].config, members[i].initial,
                                 members[i].settings));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  return Collect(slots, errors);
}

std::vector<TrajectoryRecord> RunEnsembleParallel(
    const std::vector<EnsembleMember>& members) {
  const long n = static_cast<long>(members.size());
  std::vector<std::optional<TrajectoryRecord>> slots(members.size());
  std::vector<std::exception_ptr> errors(members.size());
#pragma omp parallel for num_threads(WorkerCount()) schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      slots[i].emplace(Integrate(members[i].config, members[i].initial,
                                 members[i].settings));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  return Collect(slots, errors);
}

}  // namespace beam::kernels
