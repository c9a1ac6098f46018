#include "beam/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "beam/errors.hpp"
#include "beam/kernels.hpp"
#include "beam/regression.hpp"

namespace beam {

WeakNormSpec::WeakNormSpec(double exponent) : s(exponent) {
  if (!(exponent > 0.0 && exponent <= 1.0)) {
    throw std::invalid_argument("weak norm exponent must lie in (0, 1]");
  }
}

double PhaseNormSquared(const ModelConfig& config, const State& state,
                        const std::optional<WeakNormSpec>& spec) {
  const SpectralBasis& basis = config.basis();
  basis.CheckModal(state.y);
  basis.CheckModal(state.v);
  const auto lambda = basis.lambda().array();
  const auto y2 = state.y.array().square();
  const auto v2 = state.v.array().square();
  if (!spec) {
    return (lambda * y2).sum() + (config.mass().array() * v2).sum();
  }
  const double s = spec->s;
  double total = (lambda.pow(1.0 - s) * y2).sum() + (lambda.pow(-s) * v2).sum();
  if (config.alpha() != 0.0) {
    total += config.alpha() *
             (lambda.pow(0.5 * config.theta() - s) * v2).sum();
  }
  return total;
}

double PhaseNorm(const ModelConfig& config, const State& state,
                 const std::optional<WeakNormSpec>& spec) {
  return std::sqrt(PhaseNormSquared(config, state, spec));
}

State Difference(const State& a, const State& b) {
  if (a.y.size() != b.y.size() || a.v.size() != b.v.size()) {
    throw DimensionMismatch("states have different mode counts");
  }
  return State{a.y - b.y, a.v - b.v, a.t};
}

double DifferenceFunctional(const ModelConfig& config, const State& a,
                            const State& b) {
  const State w = Difference(a, b);
  const double s = Bulge(config, a.y);
  return 0.5 * (PhaseNormSquared(config, w) +
                config.constitutive().M(s) * Bulge(config, w.y));
}

namespace {

std::vector<TrajectoryRecord> RunPair(const ModelConfig& config,
                                      const State& a, const State& b,
                                      const IntegrationSettings& settings) {
  return kernels::RunEnsembleParallel(
      {{config, a, settings}, {config, b, settings}});
}

void CheckAligned(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  if (a.size() != b.size() || a.size() == 0) {
    throw std::invalid_argument("records have different sample counts");
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.states[k].t != b.states[k].t) {
      throw std::invalid_argument("records have different sample times");
    }
  }
}

}  // namespace

LipschitzReport LipschitzCheck(const ModelConfig& config, const State& z0,
                               const State& z0_tilde,
                               const IntegrationSettings& settings) {
  const double initial = PhaseNorm(config, Difference(z0, z0_tilde));
  if (!(initial > 0.0)) {
    throw std::invalid_argument("Lipschitz check needs distinct initial states");
  }
  if (!(settings.T > 0.0)) {
    throw std::invalid_argument("Lipschitz check needs T > 0");
  }
  const auto records = RunPair(config, z0, z0_tilde, settings);
  CheckAligned(records[0], records[1]);
  double sup = 0.0;
  for (std::size_t k = 0; k < records[0].size(); ++k) {
    sup = std::max(sup, PhaseNorm(config, Difference(records[0].states[k],
                                                     records[1].states[k])));
  }
  LipschitzReport report;
  report.sup_ratio = sup / initial;
  report.fitted_C = std::log(report.sup_ratio) / settings.T;
  return report;
}

double LowerOrderTerm(const ModelConfig& config, const ModalVector& w) {
  const SpectralBasis& basis = config.basis();
  const double p = config.constitutive().constants.p;
  GridVector g = basis.ToGrid(w);
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    g[k] = std::pow(std::abs(g[k]), p + 2.0);
  }
  return Bulge(config, w) + basis.Integrate(g);
}

namespace {

std::vector<double> LogGrid(double lo, double hi, int n) {
  std::vector<double> out(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < n; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * i / (n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace

std::vector<double> StabilityDeltaGrid() { return LogGrid(1e-4, 10.0, 25); }
std::vector<double> StabilityCGrid() { return LogGrid(1e-2, 1e6, 33); }

StabilityReport AnalyzeStabilityInequality(const TrajectoryRecord& a,
                                           const TrajectoryRecord& b) {
  CheckAligned(a, b);
  const ModelConfig& config = a.config;
  const std::size_t n = a.size();
  StabilityReport report;
  const double t0 = a.states[0].t;
  for (std::size_t k = 0; k < n; ++k) {
    const State w = Difference(a.states[k], b.states[k]);
    report.times.push_back(a.states[k].t);
    report.lhs.push_back(PhaseNormSquared(config, w));
    report.lower_order.push_back(LowerOrderTerm(config, w.y));
  }

  const std::vector<double> c_grid = StabilityCGrid();
  report.delta_grid = StabilityDeltaGrid();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best_base;
  for (double delta : report.delta_grid) {
    std::vector<double> base(n);
    double integral = 0.0;
    double needed = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0) {
        const double h = report.times[k] - report.times[k - 1];
        const double decay = std::exp(-delta * h);
        integral = decay * integral +
                   0.5 * h *
                       (decay * report.lower_order[k - 1] +
                        report.lower_order[k]);
      }
      base[k] =
          std::exp(-delta * (report.times[k] - t0)) * report.lhs[0] + integral;
      if (report.lhs[k] > 0.0) {
        needed = base[k] > 0.0 ? std::max(needed, report.lhs[k] / base[k])
                               : inf;
      }
    }
    double chosen = inf;
    for (double c : c_grid) {
      if (c * (1.0 + 1e-12) >= needed) {
        chosen = c;
        break;
      }
    }
    report.C_needed.push_back(chosen);
    if (chosen < inf) {
      report.feasible = true;
      report.C = chosen;
      report.delta = delta;
      best_base = std::move(base);
    }
  }
  if (report.feasible) {
    for (double v : best_base) report.rhs.push_back(report.C * v);
  }
  return report;
}

StabilityReport StabilityInequalityCheck(const ModelConfig& config,
                                         const State& z0a, const State& z0b,
                                         const IntegrationSettings& settings) {
  const auto records = RunPair(config, z0a, z0b, settings);
  StabilityReport report = AnalyzeStabilityInequality(records[0], records[1]);
  if (!report.feasible) {
    throw Infeasible(
        "no (C <= 1e6, delta >= 1e-4) pair satisfies the stability inequality");
  }
  return report;
}

bool AlphaScanReport::StrictlyDecreasing() const {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] > 0.0) pts.emplace_back(alphas[i], distance[i]);
  }
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i - 1].second < pts[i].second)) return false;
  }
  return true;
}

AlphaScanReport AlphaContinuityScan(const ModelConfig& config_template,
                                    const State& z0,
                                    const std::vector<double>& alphas,
                                    const IntegrationSettings& settings) {
  if (alphas.empty()) throw std::invalid_argument("alpha list is empty");
  const ModelConfig reference = config_template.WithAlpha(0.0);
  IntegrationSettings common = settings;
  if (!(common.dt > 0.0)) {
    common.dt = AutoTimeStep(reference, z0);
    for (double a : alphas) {
      common.dt =
          std::min(common.dt, AutoTimeStep(config_template.WithAlpha(a), z0));
    }
  }

  std::vector<kernels::EnsembleMember> members;
  members.push_back({reference, z0, common});
  for (double a : alphas) {
    members.push_back({config_template.WithAlpha(a), z0, common});
  }
  const auto records = kernels::RunEnsembleParallel(members);

  AlphaScanReport report;
  report.alphas = alphas;
  report.dt = records[0].dt;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const TrajectoryRecord& r = records[i + 1];
    CheckAligned(r, records[0]);
    double sup = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      sup = std::max(sup, PhaseNorm(reference, Difference(r.states[k],
                                                          records[0].states[k])));
    }
    report.distance.push_back(sup);
  }

  std::vector<double> x, y;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] > 0.0 && report.distance[i] > 0.0) {
      x.push_back(std::log(alphas[i]));
      y.push_back(std::log(report.distance[i]));
    }
  }
  if (x.size() >= 3) {
    const LineFit fit = FitLine(x, y);
    report.rho = fit.slope;
    report.C = std::exp(fit.intercept);
  }
  return report;
}

HolderReport HolderExponentWeak(const TrajectoryRecord& record,
                                const WeakNormSpec& spec) {
  std::size_t n = record.size();
  if (n < 50) {
    throw std::invalid_argument("Hoelder estimate needs at least 50 samples, got " +
                                std::to_string(n));
  }
  const double spacing = record.states[1].t - record.states[0].t;
  // A shortened final interval breaks the uniform lag grid; drop it.
  const double last = record.states[n - 1].t - record.states[n - 2].t;
  if (std::abs(last - spacing) > 1e-9 * spacing) --n;

  HolderReport report;
  std::vector<double> x, y;
  for (std::size_t lag = 1; 4 * lag <= n - 1; lag *= 2) {
    double sup = 0.0;
    for (std::size_t k = 0; k + lag < n; ++k) {
      sup = std::max(sup, PhaseNorm(record.config,
                                    Difference(record.states[k + lag],
                                               record.states[k]),
                                    spec));
    }
    const double tau = spacing * static_cast<double>(lag);
    report.taus.push_back(tau);
    report.increments.push_back(sup);
    if (sup > 0.0) {
      x.push_back(std::log(tau));
      y.push_back(std::log(sup));
    }
  }
  if (x.size() >= 2) {
    report.exponent = std::min(1.0, FitLine(x, y).slope);
  }
  return report;
}

}  // namespace beam
