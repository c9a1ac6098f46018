#include "beam/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "beam/csv.hpp"
#include "beam/random.hpp"
#include "beam/stability.hpp"

namespace beam {

namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double ParseDouble(const std::string& text) {
  if (text.empty()) throw ConfigError("expected a number, got an empty value");
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE ||
      !std::isfinite(x)) {
    throw ConfigError("expected a finite number, got '" + text + "'");
  }
  return x;
}

long long ParseInteger(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError("expected an integer, got '" + text + "'");
  }
  return x;
}

int ParseInt(const std::string& text) {
  const long long x = ParseInteger(text);
  if (x < -2147483647LL || x > 2147483647LL) {
    throw ConfigError("integer out of range: '" + text + "'");
  }
  return static_cast<int>(x);
}

std::uint64_t ParseSeed(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  if (text.empty() || text[0] == '-') {
    throw ConfigError("expected a nonnegative integer seed, got '" + text + "'");
  }
  const unsigned long long x = std::strtoull(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError("expected a nonnegative integer seed, got '" + text + "'");
  }
  return x;
}

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseDouble(Trim(item)));
  if (out.empty()) throw ConfigError("expected a comma-separated list");
  return out;
}

// Accepts plain numbers and multiples of pi: "pi", "2*pi", "2pi", "pi/2".
double ParseLength(const std::string& text) {
  const auto at = text.find("pi");
  if (at == std::string::npos) return ParseDouble(text);
  std::string coef = Trim(text.substr(0, at));
  std::string rest = Trim(text.substr(at + 2));
  if (!coef.empty() && coef.back() == '*') coef = Trim(coef.substr(0, coef.size() - 1));
  double value = std::numbers::pi * (coef.empty() ? 1.0 : ParseDouble(coef));
  if (!rest.empty()) {
    if (rest[0] != '/') throw ConfigError("cannot parse length '" + text + "'");
    value /= ParseDouble(Trim(rest.substr(1)));
  }
  return value;
}

std::string FormatList(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += FormatDouble(xs[i]);
  }
  return out;
}

struct Key {
  std::string name;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::optional<std::string>(const ExperimentConfig&)> get;
};

template <typename T>
Key Double(std::string name, T ExperimentConfig::*field) {
  return {name,
          [field](ExperimentConfig& c, const std::string& v) {
            c.*field = ParseDouble(v);
          },
          [field](const ExperimentConfig& c) -> std::optional<std::string> {
            return FormatDouble(c.*field);
          }};
}

Key OptionalDouble(std::string name,
                   std::optional<double> ExperimentConfig::*field) {
  return {name,
          [field](ExperimentConfig& c, const std::string& v) {
            c.*field = ParseDouble(v);
          },
          [field](const ExperimentConfig& c) -> std::optional<std::string> {
            if (!(c.*field)) return std::nullopt;
            return FormatDouble(*(c.*field));
          }};
}

Key Int(std::string name, int ExperimentConfig::*field) {
  return {name,
          [field](ExperimentConfig& c, const std::string& v) {
            c.*field = ParseInt(v);
          },
          [field](const ExperimentConfig& c) -> std::optional<std::string> {
            return std::to_string(c.*field);
          }};
}

Key String(std::string name, std::string ExperimentConfig::*field) {
  return {name,
          [field](ExperimentConfig& c, const std::string& v) {
            if (v.empty()) throw ConfigError("empty value");
            c.*field = v;
          },
          [field](const ExperimentConfig& c) -> std::optional<std::string> {
            return c.*field;
          }};
}

Key List(std::string name, std::vector<double> ExperimentConfig::*field) {
  return {name,
          [field](ExperimentConfig& c, const std::string& v) {
            c.*field = ParseList(v);
          },
          [field](const ExperimentConfig& c) -> std::optional<std::string> {
            return FormatList(c.*field);
          }};
}

const std::vector<Key>& Keys() {
  using C = ExperimentConfig;
  static const std::vector<Key> keys = {
      String("instance", &C::instance),
      Double("alpha", &C::alpha),
      Double("theta", &C::theta),
      Double("theta_prime", &C::theta_prime),
      Int("m", &C::m),
      {"L", [](C& c, const std::string& v) { c.L = ParseLength(v); },
       [](const C& c) -> std::optional<std::string> {
         return FormatDouble(c.L);
       }},
      String("forcing", &C::forcing),
      OptionalDouble("M_a", &C::M_a),
      OptionalDouble("M_b", &C::M_b),
      OptionalDouble("N_0", &C::N_0),
      OptionalDouble("N_1", &C::N_1),
      OptionalDouble("f_1", &C::f_1),
      OptionalDouble("f_3", &C::f_3),
      OptionalDouble("sigma1", &C::sigma1),
      OptionalDouble("p", &C::p),
      OptionalDouble("l0", &C::l0),
      OptionalDouble("l1", &C::l1),
      OptionalDouble("l2", &C::l2),
      Double("T", &C::T),
      {"dt",
       [](C& c, const std::string& v) {
         if (v == "auto") {
           c.dt.reset();
         } else {
           c.dt = ParseDouble(v);
         }
       },
       [](const C& c) -> std::optional<std::string> {
         return c.dt ? FormatDouble(*c.dt) : "auto";
       }},
      Int("stride", &C::stride),
      {"scheme",
       [](C& c, const std::string& v) {
         if (v == "auto") {
           c.scheme.reset();
           return;
         }
         try {
           c.scheme = ParseScheme(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what());
         }
       },
       [](const C& c) -> std::optional<std::string> {
         return c.scheme ? std::string(SchemeName(*c.scheme)) : "auto";
       }},
      String("initial", &C::initial),
      {"seed", [](C& c, const std::string& v) { c.seed = ParseSeed(v); },
       [](const C& c) -> std::optional<std::string> {
         return std::to_string(c.seed);
       }},
      Int("n_init", &C::n_init),
      Double("init_radius", &C::init_radius),
      Int("n_pairs", &C::n_pairs),
      List("alphas", &C::alphas),
      List("perturbations", &C::perturbations),
      Double("lipschitz_tol", &C::lipschitz_tol),
      String("guess", &C::guess),
      Double("newton_tol", &C::newton_tol),
      Int("newton_max_iter", &C::newton_max_iter),
      Double("tau_max", &C::tau_max),
      Double("u_max", &C::u_max),
      Int("samples", &C::samples),
      Double("weak_s", &C::weak_s),
      OptionalDouble("holder_min", &C::holder_min),
      Double("t_transient", &C::t_transient),
      Double("t_sample", &C::t_sample),
      Int("sample_stride", &C::sample_stride),
      Int("box_dims", &C::box_dims),
      List("box_eps", &C::box_eps),
      Double("usc_threshold", &C::usc_threshold),
      Double("noise_floor", &C::noise_floor),
      Double("rho_min", &C::rho_min),
      Double("rho_max", &C::rho_max),
      Double("terminal_tol", &C::terminal_tol),
  };
  return keys;
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void Validate(const ExperimentConfig& c) {
  Require(c.instance == "custom" || [&] {
    for (const auto& n : InstanceNames()) {
      if (n == c.instance) return true;
    }
    return false;
  }(), "unknown instance '" + c.instance + "'");
  Require(c.alpha >= 0.0 && c.alpha <= 1.0,
          "alpha = " + FormatDouble(c.alpha) + " violates 0 ≤ α ≤ 1");
  Require(c.theta >= 0.0 && c.theta <= c.theta_prime && c.theta_prime <= 1.0,
          "theta = " + FormatDouble(c.theta) + ", theta_prime = " +
              FormatDouble(c.theta_prime) + " violate 0 ≤ θ ≤ θ' ≤ 1");
  Require(c.m >= 1, "m must be a positive integer");
  Require(c.L > 0.0, "L must be positive");
  Require(c.T >= 0.0, "T must be nonnegative");
  Require(!c.dt || *c.dt > 0.0, "dt must be positive or auto");
  Require(c.stride >= 1, "stride must be at least 1");
  Require(c.n_init >= 1, "n_init must be at least 1");
  Require(c.init_radius > 0.0, "init_radius must be positive");
  Require(c.n_pairs >= 1, "n_pairs must be at least 1");
  for (double a : c.alphas) {
    Require(a >= 0.0 && a <= 1.0,
            "alphas entry " + FormatDouble(a) + " violates 0 ≤ α ≤ 1");
  }
  for (double e : c.perturbations) {
    Require(e > 0.0, "perturbations must be positive");
  }
  Require(c.lipschitz_tol > 0.0, "lipschitz_tol must be positive");
  Require(c.newton_tol > 0.0, "newton_tol must be positive");
  Require(c.newton_max_iter >= 1, "newton_max_iter must be at least 1");
  Require(c.tau_max > 0.0 && c.u_max > 0.0, "tau_max and u_max must be positive");
  Require(c.samples >= 100, "samples must be at least 100");
  Require(c.weak_s > 0.0 && c.weak_s <= 1.0, "weak_s must lie in (0, 1]");
  Require(c.t_transient > 0.0 && c.t_sample > 0.0,
          "t_transient and t_sample must be positive");
  Require(c.sample_stride >= 1, "sample_stride must be at least 1");
  Require(c.box_dims >= 1 && c.box_dims <= 8 && c.box_dims <= c.m,
          "box_dims must lie in [1, min(8, m)]");
  Require(c.box_eps.size() >= 4, "box_eps needs at least four levels");
  for (double e : c.box_eps) Require(e > 0.0, "box_eps must be positive");
  Require(c.usc_threshold > 0.0 && c.noise_floor >= 0.0,
          "usc_threshold must be positive and noise_floor nonnegative");
  Require(c.rho_min <= c.rho_max, "rho_min must not exceed rho_max");
  Require(c.terminal_tol > 0.0, "terminal_tol must be positive");
}

}  // namespace

ExperimentConfig ParseConfig(std::string_view text) {
  std::map<std::string, const Key*> by_name;
  for (const auto& k : Keys()) by_name[k.name] = &k;

  ExperimentConfig config;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = Trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) {
      throw ConfigError(where + "expected 'key = value'");
    }
    const std::string key = Trim(std::string_view(line).substr(0, eq));
    const std::string value = Trim(std::string_view(line).substr(eq + 1));
    const auto it = by_name.find(key);
    if (it == by_name.end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) {
      throw ConfigError(where + "key '" + key + "' given twice");
    }
    try {
      it->second->set(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }

  std::string missing;
  for (const char* k : {"instance", "alpha", "m", "L", "T"}) {
    if (!seen.count(k)) missing += std::string(missing.empty() ? "" : ", ") + k;
  }
  if (!missing.empty()) {
    throw ConfigError("missing required keys: " + missing);
  }
  Validate(config);
  return config;
}

std::string EmitConfig(const ExperimentConfig& config) {
  std::string out;
  for (const auto& k : Keys()) {
    if (auto v = k.get(config)) out += k.name + " = " + *v + "\n";
  }
  return out;
}

ModelConfig BuildModel(const ExperimentConfig& config) {
  NamedInstance base;
  if (config.instance != "custom") base = LookupInstance(config.instance);
  PolynomialCoefficients c = base.coefficients;
  HypothesisConstants k = base.constants;
  auto apply = [](double& target, const std::optional<double>& v) {
    if (v) target = *v;
  };
  apply(c.m_a, config.M_a);
  apply(c.m_b, config.M_b);
  apply(c.n_0, config.N_0);
  apply(c.n_1, config.N_1);
  apply(c.f_1, config.f_1);
  apply(c.f_3, config.f_3);
  apply(k.sigma1, config.sigma1);
  apply(k.p, config.p);
  apply(k.l0, config.l0);
  apply(k.l1, config.l1);
  apply(k.l2, config.l2);
  auto basis = std::make_shared<const SpectralBasis>(config.L, config.m);
  return ModelConfig(basis,
                     ConstitutiveFunctions::Polynomial(config.instance, c, k),
                     config.alpha, config.theta, config.theta_prime,
                     ResolveForcing(config.forcing, config.m));
}

State RandomState(const ModelConfig& model, std::uint64_t seed, double radius) {
  SplitMix64 rng(seed);
  const int m = model.modes();
  State z = ZeroState(model);
  const auto& lambda = model.basis().lambda();
  for (int j = 0; j < m; ++j) z.y[j] = rng.Uniform(-1.0, 1.0) / lambda[j];
  for (int j = 0; j < m; ++j) {
    z.v[j] = rng.Uniform(-1.0, 1.0) / std::sqrt(lambda[j]);
  }
  const double norm = PhaseNorm(model, z);
  if (norm > 0.0) {
    z.y *= radius / norm;
    z.v *= radius / norm;
  }
  return z;
}

namespace {

std::vector<std::string> SplitColon(std::string_view spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

int ParseMode(const std::string& text, int modes) {
  const int k = ParseInt(text);
  if (k < 1 || k > modes) {
    throw ConfigError("mode index " + text + " outside 1.." +
                      std::to_string(modes));
  }
  return k;
}

}  // namespace

State ResolveState(std::string_view spec, const ModelConfig& model) {
  const std::string s(spec);
  if (s == "zero") return ZeroState(model);
  if (s.rfind("resume:", 0) == 0) {
    const CsvData data = ReadCsv(s.substr(7));
    const int m = model.modes();
    if (data.rows.empty() ||
        data.header.size() < static_cast<std::size_t>(2 * m + 1) ||
        data.header[0] != "t") {
      throw ConfigError("resume file is not a trajectory with " +
                        std::to_string(m) + " modes");
    }
    const auto& row = data.rows.back();
    State z = ZeroState(model);
    z.t = ParseDouble(row[0]);
    for (int j = 0; j < m; ++j) {
      z.y[j] = ParseDouble(row[1 + j]);
      z.v[j] = ParseDouble(row[1 + m + j]);
    }
    return z;
  }
  const auto parts = SplitColon(spec);
  if (parts.size() == 3 && parts[0] == "mode") {
    State z = ZeroState(model);
    z.y[ParseMode(parts[1], model.modes()) - 1] = ParseDouble(parts[2]);
    return z;
  }
  if (parts.size() == 3 && parts[0] == "random") {
    const double radius = ParseDouble(parts[2]);
    if (!(radius > 0.0)) throw ConfigError("random state radius must be positive");
    return RandomState(model, ParseSeed(parts[1]), radius);
  }
  throw ConfigError("unknown state spec '" + s +
                    "' (expected zero, mode:k:amp, random:seed:radius or "
                    "resume:file)");
}

ModalVector ResolveForcing(std::string_view spec, int modes) {
  const std::string s(spec);
  if (s == "zero") return ModalVector::Zero(modes);
  const auto parts = SplitColon(spec);
  if (parts.size() == 3 && parts[0] == "mode") {
    ModalVector h = ModalVector::Zero(modes);
    h[ParseMode(parts[1], modes) - 1] = ParseDouble(parts[2]);
    return h;
  }
  const std::vector<double> values = ParseList(s);
  if (static_cast<int>(values.size()) != modes) {
    throw ConfigError("forcing lists " + std::to_string(values.size()) +
                      " coefficients, model has " + std::to_string(modes) +
                      " modes");
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), modes);
}

TimeStep ResolveTimeStep(const ExperimentConfig& config,
                         const ModelConfig& model, const State& initial) {
  TimeStep out;
  out.bound = StabilityBound(model, initial);
  out.dt = config.dt ? *config.dt : 0.5 * out.bound;
  out.scheme = config.scheme ? *config.scheme : DefaultScheme(model.modes());
  return out;
}

}  // namespace beam
