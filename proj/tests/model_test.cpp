#include "beam/model.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "beam/errors.hpp"
#include "support.hpp"

namespace beam {
namespace {

using testing::AdaptiveSimpson;
using testing::Linear;
using testing::MakeModel;
using testing::MakeNamed;
using testing::RandomVector;
using testing::SineSeries;
using testing::Unit;

constexpr double kPi = std::numbers::pi;

TEST(InstanceTest, NamesResolve) {
  for (const std::string& name : InstanceNames()) {
    EXPECT_NO_THROW(LookupInstance(name)) << name;
  }
  EXPECT_THROW(LookupInstance("no-such-instance"), std::invalid_argument);
}

TEST(ConstitutiveTest, AntiderivativesAndDerivatives) {
  const PolynomialCoefficients c{0.7, 1.3, 0.5, 0.2, -0.4, 2.0};
  const auto fn = ConstitutiveFunctions::Polynomial("p", c, {});
  EXPECT_EQ(fn.f(0.0), 0.0);
  EXPECT_EQ(fn.M_tilde(0.0), 0.0);
  EXPECT_EQ(fn.f_tilde(0.0), 0.0);
  const double h = 1e-6;
  for (double x : {-2.0, -0.3, 0.0, 0.8, 3.0}) {
    EXPECT_NEAR((fn.f_tilde(x + h) - fn.f_tilde(x - h)) / (2 * h), fn.f(x),
                1e-6);
    EXPECT_NEAR((fn.f(x + h) - fn.f(x - h)) / (2 * h), fn.f_prime(x), 1e-6);
    if (x >= 0.0) {
      EXPECT_NEAR((fn.M_tilde(x + h) - fn.M_tilde(x - h)) / (2 * h), fn.M(x),
                  1e-6);
      EXPECT_NEAR((fn.M(x + h) - fn.M(x - h)) / (2 * h), fn.M_prime(x), 1e-6);
      EXPECT_NEAR((fn.N(x + h) - fn.N(x - h)) / (2 * h), fn.N_prime(x), 1e-6);
    }
  }
  EXPECT_FALSE(fn.source_vanishes);
  EXPECT_TRUE(
      ConstitutiveFunctions::Polynomial("l", Linear(1, 1), {}).source_vanishes);
}

TEST(ModelConfigTest, RejectsOutOfRangeParameters) {
  const auto c = Linear(1.0, 1.0);
  EXPECT_THROW(MakeModel(c, 4, -0.1), std::invalid_argument);
  EXPECT_THROW(MakeModel(c, 4, 1.5), std::invalid_argument);
  EXPECT_THROW(MakeModel(c, 4, 0.5, 0.8, 0.5), std::invalid_argument);
  EXPECT_THROW(MakeModel(c, 4, 0.5, -0.1, 0.5), std::invalid_argument);
  EXPECT_THROW(MakeModel(c, 4, 0.5, 0.5, 1.1), std::invalid_argument);
  EXPECT_THROW(MakeModel(c, 4, 0.0, 1.0, 1.0, ModalVector::Zero(3)),
               DimensionMismatch);
}

TEST(ModelConfigTest, MassWeights) {
  const ModelConfig cfg = MakeModel(Linear(1, 1), 4, 0.5, 0.5, 1.0);
  for (int j = 0; j < 4; ++j) {
    const double lambda = std::pow((j + 1.0), 4);
    EXPECT_NEAR(cfg.mass()[j], 1.0 + 0.5 * std::pow(lambda, 0.25), 1e-12);
    EXPECT_NEAR(cfg.damping_weight()[j], std::sqrt(lambda), 1e-12);
    EXPECT_GE(cfg.mass()[j], 1.0);
  }
  const ModelConfig zero = cfg.WithAlpha(0.0);
  EXPECT_EQ(zero.mass(), Eigen::VectorXd::Ones(4));
}

TEST(BulgeTest, Examples) {
  const ModelConfig cfg = MakeNamed("wk-cubic", 6);
  EXPECT_EQ(Bulge(cfg, ModalVector::Zero(6)), 0.0);
  EXPECT_DOUBLE_EQ(Bulge(cfg, Unit(6, 2)), 4.0);
  EXPECT_DOUBLE_EQ(Bulge(cfg, 2.0 * Unit(6, 1)), 4.0);
  EXPECT_THROW(Bulge(cfg, ModalVector::Zero(5)), DimensionMismatch);
}

TEST(NonlinearForceTest, LinearSourceIsIdentity) {
  const ModelConfig cfg = MakeNamed("wk-linear", 12);
  const ModalVector y = RandomVector(12, 9);
  EXPECT_LT((NonlinearForce(cfg, y) - y).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(NonlinearForceTest, CubicMatchesQuadrature) {
  for (int m : {4, 16}) {
    const ModelConfig cfg = MakeNamed("wk-cubic", m);
    ModalVector y = RandomVector(m, 21);
    for (int j = 0; j < m; ++j) y[j] /= (j + 1.0) * (j + 1.0);
    const ModalVector force = NonlinearForce(cfg, y);
    for (int k = 1; k <= m; ++k) {
      const double oracle = AdaptiveSimpson(
          [&](double x) {
            const double u = SineSeries(y, kPi, x);
            return u * u * u * std::sqrt(2.0 / kPi) * std::sin(k * x);
          },
          0.0, kPi, 1e-14);
      EXPECT_NEAR(force[k - 1], oracle, 1e-10) << "m=" << m << " k=" << k;
    }
  }
}

TEST(NonlinearForceTest, OverflowIsDivergence) {
  const ModelConfig cfg = MakeNamed("wk-cubic", 4);
  EXPECT_THROW(NonlinearForce(cfg, 1e150 * Unit(4, 1)), DivergenceError);
}

TEST(AccelerationTest, Examples) {
  const ModelConfig zero_alpha = MakeModel(Linear(1.0, 1.0), 4, 0.0);
  EXPECT_EQ(Acceleration(zero_alpha, ZeroState(zero_alpha)).norm(), 0.0);
  State s = ZeroState(zero_alpha);
  s.y = Unit(4, 1);
  EXPECT_NEAR(Acceleration(zero_alpha, s)[0], -2.0, 1e-15);
  const ModelConfig unit_alpha = zero_alpha.WithAlpha(1.0);
  EXPECT_NEAR(Acceleration(unit_alpha, s)[0], -1.0, 1e-15);
}

TEST(AccelerationTest, MassNeverAmplifies) {
  const ModelConfig cfg = MakeNamed("wk-cubic-nonlocal", 8, 0.7);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    State s{RandomVector(8, seed), RandomVector(8, seed + 100), 0.0};
    const ModalVector a = Acceleration(cfg, s);
    const ModalVector f = ForceBalance(cfg, s);
    for (int j = 0; j < 8; ++j) EXPECT_LE(std::abs(a[j]), std::abs(f[j]));
  }
}

TEST(StationaryResidualTest, IsMinusForceBalanceAtRest) {
  const ModelConfig cfg = MakeNamed("wk-cubic", 8, 0.3, Unit(8, 2));
  const ModalVector y = RandomVector(8, 4);
  State s{y, ModalVector::Zero(8), 0.0};
  EXPECT_LT((StationaryResidual(cfg, y) + ForceBalance(cfg, s))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(StationaryResidualTest, Examples) {
  const ModelConfig lin = MakeNamed("linear", 4);
  EXPECT_EQ(StationaryResidual(lin, ModalVector::Zero(4)).norm(), 0.0);
  const ModalVector g = StationaryResidual(lin, Unit(4, 1));
  EXPECT_NEAR(g[0], 2.0, 1e-15);
  const ModelConfig forced = lin.WithForcing(Unit(4, 1));
  EXPECT_NEAR(StationaryResidual(forced, ModalVector::Zero(4))[0], -1.0,
              1e-15);
}

TEST(StationaryResidualTest, MonotoneWithoutForcing) {
  const ModelConfig cfg = MakeNamed("wk-cubic", 8);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ModalVector y = RandomVector(8, seed);
    EXPECT_GT(StationaryResidual(cfg, y).dot(y), 0.0);
  }
}

TEST(StationaryJacobianTest, MatchesFiniteDifferences) {
  const ModelConfig cfg = MakeNamed("wk-cubic-nonlocal", 6, 0.0, Unit(6, 1));
  const ModalVector y = RandomVector(6, 12, 0.5);
  const Eigen::MatrixXd jac = StationaryJacobian(cfg, y);
  const double h = 1e-6;
  for (int k = 0; k < 6; ++k) {
    ModalVector yp = y, ym = y;
    yp[k] += h;
    ym[k] -= h;
    const ModalVector col =
        (StationaryResidual(cfg, yp) - StationaryResidual(cfg, ym)) / (2 * h);
    for (int j = 0; j < 6; ++j) {
      EXPECT_NEAR(jac(j, k), col[j], 1e-6 * (1.0 + std::abs(col[j])));
    }
  }
}

TEST(HypothesesTest, WellPosedInstancesPass) {
  for (const char* name :
       {"wk-cubic", "wk-cubic-nonlocal", "wk-linear", "linear"}) {
    const HypothesisReport r =
        VerifyHypotheses(MakeNamed(name, 8), 100.0, 10.0, 1001);
    EXPECT_TRUE(r.AllPassed()) << name;
  }
}

TEST(HypothesesTest, NegativeStiffnessFailsFirstHypothesis) {
  const HypothesisReport r =
      VerifyHypotheses(MakeNamed("negative-m", 8), 100.0, 10.0, 1001);
  EXPECT_FALSE(r.AllPassed());
  const HypothesisCheck& h1 = r.Find("H1");
  EXPECT_FALSE(h1.passed);
  ASSERT_TRUE(h1.first_violation.has_value());
  EXPECT_EQ(*h1.first_violation, 0.0);
  EXPECT_GT(h1.worst_excess, 0.0);
}

TEST(HypothesesTest, RejectsCoarseSampling) {
  EXPECT_THROW(VerifyHypotheses(MakeNamed("linear", 4), 100.0, 10.0, 50),
               std::invalid_argument);
}

}  // namespace
}  // namespace beam
