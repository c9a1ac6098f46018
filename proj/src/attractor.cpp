#include "beam/attractor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "beam/energy.hpp"
#include "beam/errors.hpp"
#include "beam/kernels.hpp"
#include "beam/regression.hpp"

namespace beam {

StationaryResult StationarySolve(const ModelConfig& config,
                                 const ModalVector& guess, double tol,
                                 int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  config.basis().CheckModal(guess);
  StationaryResult result;
  result.y = guess;
  ModalVector g = StationaryResidual(config, result.y);
  double norm2 = g.squaredNorm();
  while (std::sqrt(norm2) > tol) {
    if (result.iterations >= max_iter) {
      throw NoConvergence("Newton did not reach ||G|| <= " +
                          std::to_string(tol) + " in " +
                          std::to_string(max_iter) + " iterations (||G|| = " +
                          std::to_string(std::sqrt(norm2)) + ")");
    }
    const Eigen::MatrixXd jac = StationaryJacobian(config, result.y);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    if (!(lu.rcond() > 1e-14)) {
      throw SingularJacobian("stationary Jacobian is singular (rcond " +
                             std::to_string(lu.rcond()) + ")");
    }
    const ModalVector step = lu.solve(-g);
    ModalVector trial = result.y + step;
    ModalVector g_trial = StationaryResidual(config, trial);
    double scale = 1.0;
    for (int halving = 0;
         halving < 30 && !(g_trial.squaredNorm() < norm2); ++halving) {
      scale *= 0.5;
      trial = result.y + scale * step;
      g_trial = StationaryResidual(config, trial);
    }
    if (!(g_trial.squaredNorm() < norm2)) {
      // Line search stalled at rounding level; take the full step.
      trial = result.y + step;
      g_trial = StationaryResidual(config, trial);
    }
    result.y = trial;
    g = g_trial;
    norm2 = g.squaredNorm();
    ++result.iterations;
  }
  result.residual_norm = std::sqrt(norm2);
  return result;
}

PointCloud::PointCloud(const ModelConfig& norm_config,
                       std::vector<State> states,
                       std::optional<WeakNormSpec> weak)
    : states_(std::move(states)),
      modes_(norm_config.modes()),
      alpha_(norm_config.alpha()),
      theta_(norm_config.theta()),
      weak_(weak) {
  const auto lambda = norm_config.basis().lambda().array();
  Eigen::ArrayXd wy, wv;
  if (weak_) {
    const double s = weak_->s;
    wy = lambda.pow(0.5 * (1.0 - s));
    wv = (lambda.pow(-s) + alpha_ * lambda.pow(0.5 * theta_ - s)).sqrt();
  } else {
    wy = lambda.sqrt();
    wv = norm_config.mass().array().sqrt();
  }
  coords_.resize(static_cast<Eigen::Index>(states_.size()), 2 * modes_);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    norm_config.basis().CheckModal(states_[i].y);
    norm_config.basis().CheckModal(states_[i].v);
    const auto row = static_cast<Eigen::Index>(i);
    coords_.row(row).head(modes_) = (wy * states_[i].y.array()).matrix();
    coords_.row(row).tail(modes_) = (wv * states_[i].v.array()).matrix();
  }
}

std::vector<State> OmegaLimitStates(const ModelConfig& config,
                                    const std::vector<State>& initials,
                                    const OmegaSettings& settings) {
  if (!(settings.T_transient > 0.0) || !(settings.T_sample > 0.0)) {
    throw std::invalid_argument("transient and sampling times must be positive");
  }
  std::vector<kernels::EnsembleMember> transient;
  for (const State& z0 : initials) {
    // The stride only needs to exceed the step count; start and end are kept.
    transient.push_back({config, z0,
                         {settings.T_transient, settings.dt,
                          std::numeric_limits<int>::max(), settings.scheme}});
  }
  const auto settled = kernels::RunEnsembleParallel(transient);

  std::vector<kernels::EnsembleMember> sampling;
  for (const auto& r : settled) {
    sampling.push_back({config, r.back(),
                        {settings.T_sample, settings.dt, settings.stride,
                         settings.scheme}});
  }
  const auto sampled = kernels::RunEnsembleParallel(sampling);
  std::vector<State> states;
  for (const auto& r : sampled) {
    states.insert(states.end(), r.states.begin(), r.states.end());
  }
  return states;
}

PointCloud OmegaLimitSample(const ModelConfig& config, const State& z0,
                            const OmegaSettings& settings) {
  return PointCloud(config, OmegaLimitStates(config, {z0}, settings));
}

double HausdorffSemidistance(const PointCloud& a, const PointCloud& b) {
  const bool same_weak =
      a.weak().has_value() == b.weak().has_value() &&
      (!a.weak() || a.weak()->s == b.weak()->s);
  if (a.modes() != b.modes() || a.alpha() != b.alpha() ||
      a.theta() != b.theta() || !same_weak) {
    throw std::invalid_argument("point clouds are measured in different norms");
  }
  return kernels::HausdorffSemidistanceParallel(a.coordinates(),
                                                b.coordinates());
}

BoxCount BoxCountingDimension(const Eigen::MatrixXd& points,
                              const std::vector<double>& eps) {
  if (points.rows() == 0) throw std::invalid_argument("box counting of no points");
  if (points.cols() < 1 || points.cols() > 8) {
    throw std::invalid_argument("box counting supports 1 to 8 coordinates");
  }
  std::vector<double> levels = eps;
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.size() < 4 || !(levels.back() > 0.0)) {
    throw std::invalid_argument(
        "box counting needs at least four distinct positive eps levels");
  }
  BoxCount out;
  std::vector<double> x, y;
  const Eigen::Index d = points.cols();
  const Eigen::RowVectorXd origin = points.colwise().minCoeff();
  std::vector<std::array<long long, 8>> cells(points.rows());
  for (double e : levels) {
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      cells[i].fill(0);
      for (Eigen::Index c = 0; c < d; ++c) {
        cells[i][c] = static_cast<long long>(
            std::floor((points(i, c) - origin[c]) / e));
      }
    }
    std::sort(cells.begin(), cells.end());
    const long n = std::unique(cells.begin(), cells.end()) - cells.begin();
    out.eps.push_back(e);
    out.counts.push_back(n);
    x.push_back(std::log(1.0 / e));
    y.push_back(std::log(static_cast<double>(n)));
  }
  out.dimension = FitLine(x, y).slope;
  return out;
}

BoxCount BoxCountingDimension(const PointCloud& cloud, int d,
                              const std::vector<double>& eps) {
  if (d < 1 || d > cloud.modes()) {
    throw std::invalid_argument("projection dimension out of range");
  }
  Eigen::MatrixXd points(static_cast<Eigen::Index>(cloud.size()), d);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    points.row(static_cast<Eigen::Index>(i)) = cloud.states()[i].y.head(d);
  }
  return BoxCountingDimension(points, eps);
}

GradientReport GradientStructureCheck(const ModelConfig& config,
                                      const State& z0,
                                      const IntegrationSettings& settings) {
  const TrajectoryRecord record = Integrate(config, z0, settings);
  GradientReport report;
  report.max_energy_increase = MaxEnergyIncrease(record);
  if (record.size() >= 2) {
    const double scale = std::max(1.0, std::abs(record.energy.front()));
    report.energy_tolerance =
        10.0 * EnergyIdentityResidual(record) * scale + 1e-14 * scale;
  }
  report.energy_monotone =
      report.max_energy_increase <= report.energy_tolerance;
  report.terminal = record.back();
  report.terminal_velocity = report.terminal.v.norm();
  report.terminal_residual =
      StationaryResidual(config, report.terminal.y).norm();
  return report;
}

RegularityReport AttractorRegularityCheck(const ModelConfig& config,
                                          const std::vector<State>& cloud) {
  RegularityReport report;
  const auto lambda = config.basis().lambda().array();
  for (const State& z : cloud) {
    report.sup_Au = std::max(report.sup_Au, (lambda * z.y.array()).matrix().norm());
    report.sup_sqrtA_v = std::max(
        report.sup_sqrtA_v, std::sqrt((lambda * z.v.array().square()).sum()));
    report.sup_second_energy =
        std::max(report.sup_second_energy, SecondEnergy(config, z));
  }
  return report;
}

UscReport UpperSemicontinuityScan(const ModelConfig& config_template,
                                  const std::vector<double>& alphas,
                                  const std::vector<State>& initials,
                                  const OmegaSettings& settings,
                                  double noise_floor) {
  if (alphas.empty() || initials.empty()) {
    throw std::invalid_argument("scan needs alphas and initial states");
  }
  const ModelConfig reference = config_template.WithAlpha(0.0);
  auto cloud_for = [&](const ModelConfig& config) {
    OmegaSettings s = settings;
    if (!(s.dt > 0.0)) {
      s.dt = std::numeric_limits<double>::infinity();
      for (const State& z0 : initials) s.dt = std::min(s.dt, AutoTimeStep(config, z0));
    }
    return PointCloud(reference, OmegaLimitStates(config, initials, s));
  };
  const PointCloud base = cloud_for(reference);
  UscReport report;
  report.alphas = alphas;
  for (double a : alphas) {
    report.distance.push_back(
        HausdorffSemidistance(cloud_for(config_template.WithAlpha(a)), base));
  }
  report.decreasing = true;
  for (std::size_t i = 1; i < report.distance.size(); ++i) {
    if (report.distance[i] > report.distance[i - 1] + noise_floor) {
      report.decreasing = false;
    }
  }
  return report;
}

}  // namespace beam
