#include "beam/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include "beam/attractor.hpp"
#include "beam/csv.hpp"
#include "beam/energy.hpp"
#include "beam/errors.hpp"
#include "beam/kernels.hpp"
#include "beam/stability.hpp"

#ifndef BEAM_VERSION_STRING
#define BEAM_VERSION_STRING "unknown"
#endif

namespace beam {

std::string VersionString() { return BEAM_VERSION_STRING; }

namespace {

struct Outcome {
  int status = kExitOk;
  std::string message;
};

struct Context {
  const ExperimentConfig& config;
  ModelConfig model;
  State initial;
  TimeStep step;
  int stride;
  std::ostream& log;
  // Written once the subcommand has finished, in name order.
  std::map<std::string, CsvTable> tables;

  IntegrationSettings Settings() const {
    return {config.T, step.dt, stride, step.scheme};
  }
  void Put(const std::string& file, CsvTable table) {
    tables.insert_or_assign(file, std::move(table));
  }
};

std::string Str(double x) { return FormatDouble(x); }

std::vector<std::string> ModeHeader(int m) {
  std::vector<std::string> h{"t"};
  for (int j = 1; j <= m; ++j) h.push_back("y_" + std::to_string(j));
  for (int j = 1; j <= m; ++j) h.push_back("v_" + std::to_string(j));
  return h;
}

CsvTable TrajectoryTable(const TrajectoryRecord& record) {
  auto header = ModeHeader(record.config.modes());
  header.insert(header.end(), {"energy", "dissipation", "phase_norm"});
  CsvTable table(header);
  for (std::size_t k = 0; k < record.size(); ++k) {
    const State& z = record.states[k];
    std::vector<double> row{z.t};
    row.insert(row.end(), z.y.begin(), z.y.end());
    row.insert(row.end(), z.v.begin(), z.v.end());
    row.insert(row.end(), {record.energy[k], record.dissipation[k],
                           record.phase_norm[k]});
    table.AddRow(row);
  }
  return table;
}

std::vector<std::string> ExperimentCells(const Context& ctx) {
  return {ctx.config.instance, Str(ctx.config.alpha), Str(ctx.config.theta),
          Str(ctx.config.theta_prime), std::to_string(ctx.config.m),
          Str(ctx.step.dt)};
}

const std::vector<std::string> kExperimentHeader = {
    "instance", "alpha", "theta", "theta_prime", "m", "dt"};

std::vector<std::string> WithExperiment(std::vector<std::string> tail) {
  std::vector<std::string> h = kExperimentHeader;
  h.insert(h.end(), tail.begin(), tail.end());
  return h;
}

std::vector<State> RandomStates(const Context& ctx, int count,
                                std::uint64_t first_seed) {
  std::vector<State> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(RandomState(ctx.model, first_seed + i, ctx.config.init_radius));
  }
  return out;
}

Outcome Simulate(Context& ctx) {
  try {
    const TrajectoryRecord record =
        Integrate(ctx.model, ctx.initial, ctx.Settings());
    ctx.Put("trajectory.csv", TrajectoryTable(record));
    CsvTable summary(WithExperiment({"steps", "samples",
                                     "energy_identity_residual",
                                     "max_energy_increase"}));
    auto row = ExperimentCells(ctx);
    row.insert(row.end(),
               {std::to_string(record.steps), std::to_string(record.size()),
                record.size() >= 2 ? Str(EnergyIdentityResidual(record)) : "",
                Str(MaxEnergyIncrease(record))});
    summary.AddRow(row);
    ctx.Put("summary.csv", summary);
  } catch (const TrajectoryDiverged& e) {
    ctx.Put("trajectory.csv", TrajectoryTable(e.partial()));
    throw;
  }
  return {};
}

Outcome Hypotheses(Context& ctx) {
  const HypothesisReport report = VerifyHypotheses(
      ctx.model, ctx.config.tau_max, ctx.config.u_max, ctx.config.samples);
  CsvTable table({"hypothesis", "passed", "first_violation", "worst_excess"});
  std::string failed;
  for (const auto& c : report.checks) {
    table.AddRow({c.name, c.passed ? "1" : "0",
                  c.first_violation ? Str(*c.first_violation) : "",
                  Str(c.worst_excess)});
    ctx.log << "  " << c.name << ": " << (c.passed ? "pass" : "FAIL") << "\n";
    if (!c.passed) failed += (failed.empty() ? "" : ",") + c.name;
  }
  ctx.Put("hypotheses.csv", table);
  if (!failed.empty()) return {kExitClaimFailed, "hypotheses failed: " + failed};
  return {};
}

Outcome Decay(Context& ctx) {
  const auto initials = RandomStates(ctx, ctx.config.n_init, ctx.config.seed);
  std::vector<kernels::EnsembleMember> members;
  for (const State& z0 : initials) members.push_back({ctx.model, z0, ctx.Settings()});
  const auto records = kernels::RunEnsembleParallel(members);

  CsvTable table(WithExperiment({"seed", "K1", "delta", "K2", "rms",
                                 "residual", "tail_max_norm", "ball_radius",
                                 "inside_ball", "C_perturbed"}));
  const double eps = PerturbedEnergyThreshold(ctx.model);
  std::string failures;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TrajectoryRecord& r = records[i];
    const DecayFit fit = FitDecay(r);
    const double radius = 1.1 * std::sqrt(fit.K2);
    double tail_max = 0.0;
    for (std::size_t k = r.size() - r.size() / 4; k < r.size(); ++k) {
      tail_max = std::max(tail_max, r.phase_norm[k]);
    }
    const bool inside = tail_max <= radius;
    auto row = ExperimentCells(ctx);
    row.insert(row.end(),
               {std::to_string(ctx.config.seed + i), Str(fit.K1),
                Str(fit.delta), Str(fit.K2), Str(fit.rms),
                Str(EnergyIdentityResidual(r)), Str(tail_max), Str(radius),
                inside ? "1" : "0",
                eps > 0.0 ? Str(FitPerturbedDecayConstant(r, eps)) : ""});
    table.AddRow(row);
    if (!(fit.delta > 0.0) || !inside) {
      failures += " seed " + std::to_string(ctx.config.seed + i);
    }
  }
  ctx.Put("decay.csv", table);
  if (!failures.empty()) {
    return {kExitClaimFailed, "no exponential absorption for" + failures};
  }
  return {};
}

Outcome Stability(Context& ctx) {
  const int pairs = ctx.config.n_pairs;
  const auto states = RandomStates(ctx, 2 * pairs, ctx.config.seed);
  std::vector<kernels::EnsembleMember> members;
  for (const State& z0 : states) members.push_back({ctx.model, z0, ctx.Settings()});
  const auto records = kernels::RunEnsembleParallel(members);

  CsvTable summary({"pair", "seed_a", "seed_b", "feasible", "C", "delta"});
  CsvTable sides({"pair", "t", "lhs", "rhs", "lower_order"});
  std::string failures;
  for (int k = 0; k < pairs; ++k) {
    const StabilityReport rep =
        AnalyzeStabilityInequality(records[2 * k], records[2 * k + 1]);
    summary.AddRow({std::to_string(k), std::to_string(ctx.config.seed + 2 * k),
                    std::to_string(ctx.config.seed + 2 * k + 1),
                    rep.feasible ? "1" : "0", rep.feasible ? Str(rep.C) : "",
                    rep.feasible ? Str(rep.delta) : ""});
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
      sides.AddRow({std::to_string(k), Str(rep.times[i]), Str(rep.lhs[i]),
                    rep.feasible ? Str(rep.rhs[i]) : "",
                    Str(rep.lower_order[i])});
    }
    if (!rep.feasible) failures += " " + std::to_string(k);
  }
  ctx.Put("stability.csv", summary);
  ctx.Put("stability_sides.csv", sides);

  // Continuous dependence from the configured initial state along a fixed
  // random direction.
  State direction = RandomState(ctx.model, ctx.config.seed + 0x5eedULL, 1.0);
  CsvTable lip({"perturbation", "sup_ratio", "fitted_C"});
  std::vector<double> ratios;
  for (double eps : ctx.config.perturbations) {
    State tilde = ctx.initial;
    tilde.y += eps * direction.y;
    tilde.v += eps * direction.v;
    const LipschitzReport rep =
        LipschitzCheck(ctx.model, ctx.initial, tilde, ctx.Settings());
    lip.AddRow({Str(eps), Str(rep.sup_ratio), Str(rep.fitted_C)});
    ratios.push_back(rep.sup_ratio);
  }
  ctx.Put("lipschitz.csv", lip);

  if (!failures.empty()) {
    return {kExitClaimFailed, "stability inequality infeasible for pairs" + failures};
  }
  for (double r : ratios) {
    if (!std::isfinite(r) ||
        std::abs(r - ratios.front()) > ctx.config.lipschitz_tol * ratios.front()) {
      return {kExitClaimFailed, "Lipschitz ratios disagree across perturbation sizes"};
    }
  }
  return {};
}

Outcome AlphaScan(Context& ctx) {
  IntegrationSettings settings = ctx.Settings();
  if (!ctx.config.dt) settings.dt = 0.0;  // common auto step across alphas
  const AlphaScanReport rep =
      AlphaContinuityScan(ctx.model, ctx.initial, ctx.config.alphas, settings);
  ctx.step.dt = rep.dt;
  CsvTable table({"alpha", "D_alpha", "rho_fit", "C_fit"});
  for (std::size_t i = 0; i < rep.alphas.size(); ++i) {
    table.AddRow({Str(rep.alphas[i]), Str(rep.distance[i]),
                  rep.rho ? Str(*rep.rho) : "", rep.C ? Str(*rep.C) : ""});
  }
  ctx.Put("alpha_scan.csv", table);
  if (!rep.rho) {
    throw std::invalid_argument(
        "rate regression needs at least three positive alphas with D > 0");
  }
  ctx.log << "  rho = " << Str(*rep.rho) << "\n";
  if (*rep.rho < ctx.config.rho_min || *rep.rho > ctx.config.rho_max) {
    return {kExitClaimFailed, "fitted rho " + Str(*rep.rho) + " outside [" +
                                  Str(ctx.config.rho_min) + ", " +
                                  Str(ctx.config.rho_max) + "]"};
  }
  if (!rep.StrictlyDecreasing()) {
    return {kExitClaimFailed, "D(alpha) is not strictly decreasing as alpha -> 0"};
  }
  return {};
}

Outcome Stationary(Context& ctx) {
  const State guess = ResolveState(ctx.config.guess, ctx.model);
  const StationaryResult res = StationarySolve(
      ctx.model, guess.y, ctx.config.newton_tol, ctx.config.newton_max_iter);
  CsvTable modes({"mode", "y"});
  for (int j = 0; j < ctx.model.modes(); ++j) {
    modes.AddRow({std::to_string(j + 1), Str(res.y[j])});
  }
  ctx.Put("stationary.csv", modes);
  CsvTable summary({"iterations", "residual_norm", "phase_norm", "energy"});
  const State z{res.y, ModalVector::Zero(ctx.model.modes()), 0.0};
  summary.AddRow({std::to_string(res.iterations), Str(res.residual_norm),
                  Str(PhaseNorm(ctx.model, z)), Str(Energy(ctx.model, z))});
  ctx.Put("stationary_summary.csv", summary);
  ctx.log << "  converged in " << res.iterations << " iterations\n";
  return {};
}

OmegaSettings Omega(const Context& ctx) {
  return {ctx.config.t_transient, ctx.config.t_sample, ctx.config.sample_stride,
          ctx.step.dt, ctx.step.scheme};
}

Outcome Attractor(Context& ctx) {
  const auto initials = RandomStates(ctx, ctx.config.n_init, ctx.config.seed);
  OmegaSettings omega = Omega(ctx);
  for (const State& z0 : initials) {
    if (!ctx.config.dt) omega.dt = std::min(omega.dt, AutoTimeStep(ctx.model, z0));
  }
  const std::vector<State> states = OmegaLimitStates(ctx.model, initials, omega);
  const PointCloud cloud(ctx.model, states);

  auto header = ModeHeader(ctx.model.modes());
  header.insert(header.begin(), "member");
  CsvTable cloud_table(header);
  const std::size_t per_member = states.size() / initials.size();
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::vector<std::string> row{std::to_string(i / per_member), Str(states[i].t)};
    for (double y : states[i].y) row.push_back(Str(y));
    for (double v : states[i].v) row.push_back(Str(v));
    cloud_table.AddRow(row);
  }
  ctx.Put("cloud.csv", cloud_table);

  const RegularityReport reg = AttractorRegularityCheck(ctx.model, states);
  CsvTable reg_table({"sup_Au", "sup_sqrtA_v", "sup_second_energy"});
  reg_table.AddRow(std::vector<double>{reg.sup_Au, reg.sup_sqrtA_v,
                                       reg.sup_second_energy});
  ctx.Put("regularity.csv", reg_table);

  const BoxCount box =
      BoxCountingDimension(cloud, ctx.config.box_dims, ctx.config.box_eps);
  CsvTable box_table({"eps", "count", "dimension"});
  for (std::size_t i = 0; i < box.eps.size(); ++i) {
    box_table.AddRow({Str(box.eps[i]), std::to_string(box.counts[i]),
                      Str(box.dimension)});
  }
  ctx.Put("box.csv", box_table);

  const GradientReport grad =
      GradientStructureCheck(ctx.model, ctx.initial, ctx.Settings());
  std::string stationary_gap;
  try {
    const StationaryResult st =
        StationarySolve(ctx.model, grad.terminal.y, ctx.config.newton_tol,
                        ctx.config.newton_max_iter);
    const State z{st.y, ModalVector::Zero(ctx.model.modes()), 0.0};
    stationary_gap = Str(PhaseNorm(ctx.model, Difference(grad.terminal, z)));
  } catch (const std::runtime_error& e) {
    ctx.log << "  stationary solve from the terminal state failed: " << e.what()
            << "\n";
  }
  CsvTable grad_table({"max_energy_increase", "energy_tolerance",
                       "energy_monotone", "terminal_velocity",
                       "terminal_residual", "stationary_distance"});
  grad_table.AddRow({Str(grad.max_energy_increase), Str(grad.energy_tolerance),
                     grad.energy_monotone ? "1" : "0",
                     Str(grad.terminal_velocity), Str(grad.terminal_residual),
                     stationary_gap});
  ctx.Put("gradient.csv", grad_table);

  if (!grad.energy_monotone) {
    return {kExitClaimFailed, "energy increased beyond the scheme tolerance"};
  }
  if (grad.terminal_velocity > ctx.config.terminal_tol ||
      grad.terminal_residual > ctx.config.terminal_tol) {
    return {kExitClaimFailed, "trajectory has not settled on a stationary point"};
  }
  return {};
}

Outcome UscScan(Context& ctx) {
  const auto initials = RandomStates(ctx, ctx.config.n_init, ctx.config.seed);
  OmegaSettings omega = Omega(ctx);
  if (!ctx.config.dt) omega.dt = 0.0;  // each alpha picks its own step
  const UscReport rep = UpperSemicontinuityScan(
      ctx.model, ctx.config.alphas, initials, omega, ctx.config.noise_floor);
  CsvTable table({"alpha", "h"});
  for (std::size_t i = 0; i < rep.alphas.size(); ++i) {
    table.AddRow(std::vector<double>{rep.alphas[i], rep.distance[i]});
  }
  ctx.Put("usc.csv", table);
  if (!rep.decreasing) {
    return {kExitClaimFailed, "h(A_alpha, A_0) does not decrease with alpha"};
  }
  if (rep.distance.back() > ctx.config.usc_threshold) {
    return {kExitClaimFailed, "final h(A_alpha, A_0) = " +
                                  Str(rep.distance.back()) + " above " +
                                  Str(ctx.config.usc_threshold)};
  }
  return {};
}

Outcome Holder(Context& ctx) {
  const TrajectoryRecord record =
      Integrate(ctx.model, ctx.initial, ctx.Settings());
  const WeakNormSpec spec(ctx.config.weak_s);
  const HolderReport rep = HolderExponentWeak(record, spec);
  const double threshold =
      ctx.config.holder_min ? *ctx.config.holder_min : 0.45 * ctx.config.weak_s;
  CsvTable table({"tau", "increment"});
  for (std::size_t i = 0; i < rep.taus.size(); ++i) {
    table.AddRow(std::vector<double>{rep.taus[i], rep.increments[i]});
  }
  ctx.Put("holder.csv", table);
  CsvTable summary({"s", "exponent", "threshold"});
  summary.AddRow(std::vector<double>{spec.s, rep.exponent, threshold});
  ctx.Put("holder_summary.csv", summary);
  if (rep.exponent < threshold) {
    return {kExitClaimFailed, "Hoelder exponent " + Str(rep.exponent) +
                                  " below " + Str(threshold)};
  }
  return {};
}

using Handler = Outcome (*)(Context&);

const std::vector<std::pair<std::string, Handler>>& Handlers() {
  static const std::vector<std::pair<std::string, Handler>> table = {
      {"simulate", Simulate},     {"hypotheses", Hypotheses},
      {"decay", Decay},           {"stability", Stability},
      {"alpha-scan", AlphaScan},  {"stationary", Stationary},
      {"attractor", Attractor},   {"usc-scan", UscScan},
      {"holder", Holder},
  };
  return table;
}

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

void ReportError(std::ostream& err, int code, const std::string& kind,
                 const std::string& message) {
  err << "error code=" << code << " kind=" << kind
      << " message=" << Quote(message) << "\n";
}

}  // namespace

std::vector<std::string> SubcommandNames() {
  std::vector<std::string> names;
  for (const auto& [n, h] : Handlers()) names.push_back(n);
  return names;
}

int RunSubcommand(std::string_view name, const ExperimentConfig& config,
                  const std::filesystem::path& config_path,
                  const std::filesystem::path& out_dir, std::ostream& log,
                  std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Handler handler = nullptr;
  for (const auto& [n, h] : Handlers()) {
    if (n == name) handler = h;
  }
  if (!handler) {
    ReportError(err, kExitRuntimeError, "usage",
                "unknown subcommand '" + std::string(name) + "'");
    return kExitRuntimeError;
  }

  std::optional<Context> ctx;
  Outcome outcome;
  std::string kind;
  try {
    ModelConfig model = BuildModel(config);
    State initial = ResolveState(config.initial, model);
    const TimeStep step = ResolveTimeStep(config, model, initial);
    // Keep the sampling interval at or below T/200 so the trapezoid rule in
    // the energy ledger stays below the scheme error.
    int stride = config.stride;
    if (config.T > 0.0 && stride * step.dt > config.T / 200.0) {
      stride = std::max(1, static_cast<int>(config.T / (200.0 * step.dt)));
    }
    ctx.emplace(Context{config, std::move(model), std::move(initial), step,
                        stride, log, {}});
    log << "beam-attractor " << VersionString() << " " << name << "\n"
        << "  rk4 stability bound " << Str(step.bound) << ", dt "
        << Str(step.dt) << (config.dt ? "" : " (auto)") << ", scheme "
        << SchemeName(step.scheme) << "\n";
    if (stride != config.stride) {
      log << "  stride reduced from " << config.stride << " to " << stride
          << " (stride * dt <= T/200)\n";
    }
    outcome = handler(*ctx);
    if (outcome.status != kExitOk) kind = "claim-check";
  } catch (const ConfigError& e) {
    outcome = {kExitRuntimeError, e.what()};
    kind = "config";
  } catch (const Infeasible& e) {
    outcome = {kExitClaimFailed, e.what()};
    kind = "infeasible";
  } catch (const DivergenceError& e) {
    outcome = {kExitRuntimeError, e.what()};
    kind = "divergence";
  } catch (const NoConvergence& e) {
    outcome = {kExitRuntimeError, e.what()};
    kind = "no-convergence";
  } catch (const SingularJacobian& e) {
    outcome = {kExitRuntimeError, e.what()};
    kind = "singular-jacobian";
  } catch (const NonPlateau& e) {
    outcome = {kExitRuntimeError, e.what()};
    kind = "non-plateau";
  } catch (const std::exception& e) {
    outcome = {kExitRuntimeError, e.what()};
    kind = "runtime";
  }

  try {
    std::filesystem::create_directories(out_dir);
    std::string outputs;
    if (ctx) {
      for (const auto& [file, table] : ctx->tables) {
        table.Write(out_dir / file);
        outputs += (outputs.empty() ? "" : ",") + file;
      }
    }
    const double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::ofstream meta(out_dir / "metadata.txt", std::ios::binary);
    meta << "version = " << VersionString() << "\n"
         << "subcommand = " << name << "\n"
         << "config_file = " << config_path.string() << "\n";
    if (ctx) {
      meta << "scheme = " << SchemeName(ctx->step.scheme) << "\n"
           << "dt = " << Str(ctx->step.dt) << "\n"
           << "stability_bound = " << Str(ctx->step.bound) << "\n"
           << "stride = " << ctx->stride << "\n";
    }
    meta << "threads = " << kernels::WorkerCount() << "\n"
         << "wall_time_s = " << Str(wall) << "\n"
         << "exit_status = " << outcome.status << "\n"
         << "outputs = " << outputs << "\n"
         << "\n[config]\n"
         << EmitConfig(config);
    if (!meta) throw std::runtime_error("cannot write metadata.txt");
  } catch (const std::exception& e) {
    ReportError(err, kExitRuntimeError, "io", e.what());
    return kExitRuntimeError;
  }

  if (outcome.status != kExitOk) {
    ReportError(err, outcome.status, kind, outcome.message);
  }
  return outcome.status;
}

}  // namespace beam
