#include "beam/config.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include "beam/csv.hpp"
#include "beam/random.hpp"
#include "beam/regression.hpp"
#include "beam/stability.hpp"

namespace beam {
namespace {

constexpr const char* kMinimal =
    "instance = wk-cubic\n"
    "alpha = 0.5\n"
    "m = 16\n"
    "L = pi\n"
    "T = 10\n";

std::string ErrorOf(const std::string& text) {
  try {
    ParseConfig(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseConfigTest, EmptyListsRequiredKeys) {
  const std::string msg = ErrorOf("");
  for (const char* key : {"instance", "alpha", "m", "L", "T"}) {
    EXPECT_NE(msg.find(key), std::string::npos) << key;
  }
}

TEST(ParseConfigTest, MinimalUsesDefaults) {
  const ExperimentConfig c = ParseConfig(kMinimal);
  EXPECT_EQ(c.instance, "wk-cubic");
  EXPECT_EQ(c.alpha, 0.5);
  EXPECT_EQ(c.m, 16);
  EXPECT_DOUBLE_EQ(c.L, std::numbers::pi);
  EXPECT_EQ(c.theta, 1.0);
  EXPECT_FALSE(c.dt.has_value());
  EXPECT_FALSE(c.scheme.has_value());
  EXPECT_EQ(c.stride, 1);
  EXPECT_EQ(c.forcing, "zero");
}

TEST(ParseConfigTest, CommentsAndWhitespace) {
  const ExperimentConfig c = ParseConfig(
      "# experiment\n\n  instance=linear  # trailing\n"
      "alpha =0\nm= 4\nL = 2*pi\nT = 1\nscheme = imex\ndt = 0.01\n");
  EXPECT_DOUBLE_EQ(c.L, 2 * std::numbers::pi);
  EXPECT_EQ(c.scheme, Scheme::kImex);
  EXPECT_EQ(c.dt, 0.01);
}

TEST(ParseConfigTest, LengthForms) {
  const auto length = [](const std::string& v) {
    return ParseConfig("instance = linear\nalpha = 0\nm = 4\nT = 1\nL = " + v)
        .L;
  };
  EXPECT_DOUBLE_EQ(length("pi"), std::numbers::pi);
  EXPECT_DOUBLE_EQ(length("2pi"), 2 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(length("pi/2"), std::numbers::pi / 2);
  EXPECT_DOUBLE_EQ(length("3.5"), 3.5);
}

TEST(ParseConfigTest, RangeViolations) {
  std::string text = kMinimal;
  EXPECT_NE(ErrorOf(text + "theta = 0.8\ntheta_prime = 0.5\n")
                .find("0 ≤ θ ≤ θ' ≤ 1"),
            std::string::npos);
  std::string bad_alpha = kMinimal;
  bad_alpha.replace(bad_alpha.find("alpha = 0.5"), 11, "alpha = 1.5");
  EXPECT_NE(ErrorOf(bad_alpha).find("0 ≤ α ≤ 1"), std::string::npos);
}

TEST(ParseConfigTest, SyntaxErrorsCarryLineNumbers) {
  EXPECT_NE(ErrorOf(std::string(kMinimal) + "bogus = 1\n").find("line 6"),
            std::string::npos);
  EXPECT_NE(ErrorOf(std::string(kMinimal) + "m = 8\n").find("given twice"),
            std::string::npos);
  EXPECT_NE(ErrorOf(std::string(kMinimal) + "stride\n").find("line 6"),
            std::string::npos);
  EXPECT_NE(ErrorOf(std::string(kMinimal) + "stride = two\n").find("line 6"),
            std::string::npos);
}

TEST(EmitConfigTest, RoundTrip) {
  ExperimentConfig c = ParseConfig(kMinimal);
  EXPECT_EQ(ParseConfig(EmitConfig(c)), c);
  c.instance = "custom";
  c.M_a = 0.1 + 0.2;
  c.f_3 = 1.0 / 3.0;
  c.sigma1 = 2.0;
  c.dt = 1e-3 / 7.0;
  c.scheme = Scheme::kRk4;
  c.alphas = {0.3, 1.0 / 3.0};
  c.forcing = "mode:2:0.5";
  c.initial = "random:4:1.5";
  c.holder_min = 0.4;
  c.seed = 18446744073709551615ull;
  c.L = std::numbers::pi;
  EXPECT_EQ(ParseConfig(EmitConfig(c)), c);
  EXPECT_EQ(EmitConfig(ParseConfig(EmitConfig(c))), EmitConfig(c));
}

TEST(BuildModelTest, OverridesApply) {
  ExperimentConfig c = ParseConfig(kMinimal);
  c.f_3 = 2.0;
  const ModelConfig model = BuildModel(c);
  EXPECT_EQ(model.constitutive().f(1.0), 2.0);
  EXPECT_EQ(model.modes(), 16);
  EXPECT_EQ(model.alpha(), 0.5);
}

TEST(RandomStateTest, DeterministicAndScaled) {
  const ModelConfig model = BuildModel(ParseConfig(kMinimal));
  const State a = RandomState(model, 5, 2.5), b = RandomState(model, 5, 2.5);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.v, b.v);
  EXPECT_NEAR(PhaseNorm(model, a), 2.5, 1e-13);
  EXPECT_NE(RandomState(model, 6, 2.5).y, a.y);
}

TEST(ResolveStateTest, Specs) {
  const ModelConfig model = BuildModel(ParseConfig(kMinimal));
  EXPECT_EQ(ResolveState("zero", model).y.norm(), 0.0);
  const State m = ResolveState("mode:3:0.25", model);
  EXPECT_EQ(m.y[2], 0.25);
  EXPECT_EQ(m.v.norm(), 0.0);
  EXPECT_NEAR(PhaseNorm(model, ResolveState("random:2:3", model)), 3.0, 1e-13);
  EXPECT_THROW(ResolveState("mode:17:1", model), ConfigError);
  EXPECT_THROW(ResolveState("nonsense", model), ConfigError);
}

TEST(ResolveStateTest, ResumeReadsLastRow) {
  const auto dir = std::filesystem::temp_directory_path() / "beam_resume_test";
  std::filesystem::create_directories(dir);
  std::vector<std::string> header{"t", "y1", "y2", "v1", "v2"};
  CsvTable table(header);
  table.AddRow(std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0});
  table.AddRow(std::vector<double>{0.5, 0.1, 0.2, 0.3, 1.0 / 3.0});
  table.Write(dir / "trajectory.csv");
  const ModelConfig model = BuildModel(ParseConfig(
      "instance = linear\nalpha = 0\nm = 2\nL = pi\nT = 1\nbox_dims = 2\n"));
  const State z =
      ResolveState("resume:" + (dir / "trajectory.csv").string(), model);
  EXPECT_EQ(z.t, 0.5);
  EXPECT_EQ(z.y[1], 0.2);
  EXPECT_EQ(z.v[1], 1.0 / 3.0);
  std::filesystem::remove_all(dir);
}

TEST(ResolveForcingTest, Specs) {
  EXPECT_EQ(ResolveForcing("zero", 3).norm(), 0.0);
  EXPECT_EQ(ResolveForcing("mode:2:1.5", 3)[1], 1.5);
  const ModalVector list = ResolveForcing("1,2,3", 3);
  EXPECT_EQ(list[2], 3.0);
  EXPECT_THROW(ResolveForcing("1,2", 3), ConfigError);
}

TEST(ResolveTimeStepTest, AutoIsHalfTheBound) {
  ExperimentConfig c = ParseConfig(kMinimal);
  const ModelConfig model = BuildModel(c);
  const State z = ResolveState(c.initial, model);
  const TimeStep ts = ResolveTimeStep(c, model, z);
  EXPECT_DOUBLE_EQ(ts.dt, 0.5 * ts.bound);
  EXPECT_EQ(ts.scheme, Scheme::kRk4);
  c.dt = 1e-3;
  EXPECT_EQ(ResolveTimeStep(c, model, z).dt, 1e-3);
}

TEST(SplitMix64Test, ReferenceStream) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.Next(), 0xe220a8397b1dcdafull);
  EXPECT_EQ(rng.Next(), 0x6e789e6aa1b965f4ull);
  SplitMix64 u(42);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.Uniform();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(FitLineTest, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const LineFit fit = FitLine(x, y);
  EXPECT_NEAR(fit.slope, 2.0, 1e-14);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-14);
  EXPECT_NEAR(fit.rms, 0.0, 1e-14);
  const std::vector<double> flat{1, 1, 1, 1};
  EXPECT_THROW(FitLine(flat, y), std::invalid_argument);
}

TEST(CsvTest, FormatRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    EXPECT_EQ(std::stod(FormatDouble(x)), x);
  }
  CsvTable t({"a", "b"});
  t.AddRow(std::vector<double>{0.1, 2.0});
  EXPECT_EQ(t.ToString(), "a,b\n0.10000000000000001,2\n");
  EXPECT_THROW(t.AddRow(std::vector<std::string>{"x"}), std::logic_error);
}

}  // namespace
}  // namespace beam
