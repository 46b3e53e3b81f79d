#include "pec/model.h"

#include <gtest/gtest.h>

#include "pec/quadtank_case.h"

namespace pec {
namespace {

using Eigen::MatrixXd;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const PecError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no throw";
  return ErrorCode::kParse;
}

GTEST_TEST(ModelTest, ScenarioSelection) {
  const AttackScenario sc = MakeScenario(4, {4, 1});
  EXPECT_EQ(sc.sensors, (std::vector<int>{1, 4}));
  EXPECT_EQ(sc.Gamma.transpose() * sc.Gamma, MatrixXd::Identity(2, 2));
  EXPECT_EQ(sc.Gamma(0, 0), 1.0);
  EXPECT_EQ(sc.Gamma(3, 1), 1.0);
  EXPECT_EQ(sc.Gamma_pinv, sc.Gamma.transpose());
  EXPECT_EQ(SensorLabel(sc.sensors), "{1,4}");
  EXPECT_EQ(CodeOf([] { MakeScenario(4, {}); }), ErrorCode::kBadIndex);
  EXPECT_EQ(CodeOf([] { MakeScenario(4, {5}); }), ErrorCode::kBadIndex);
  EXPECT_EQ(CodeOf([] { MakeScenario(4, {0}); }), ErrorCode::kBadIndex);
  EXPECT_EQ(CodeOf([] { MakeScenario(4, {2, 2}); }), ErrorCode::kBadIndex);
}

GTEST_TEST(ModelTest, PeakRules) {
  const DisturbanceBounds ball =
      BoundsFromPeaks(0.5, 0.1, 2, 4, PeakRule::kCircumscribedBall);
  EXPECT_NEAR(ball.W_w(0, 0), 1.0 / (2 * 0.25), 1e-14);
  EXPECT_NEAR(ball.W_v(3, 3), 1.0 / (4 * 0.01), 1e-12);
  const DisturbanceBounds norm =
      BoundsFromPeaks(0.5, 0.1, 2, 4, PeakRule::kNormBound);
  EXPECT_NEAR(norm.W_w(1, 1), 4.0, 1e-14);
  EXPECT_EQ(norm.W_w(0, 1), 0.0);
  EXPECT_EQ(CodeOf([] { BoundsFromPeaks(0.0, 1.0, 1, 1); }),
            ErrorCode::kNonPositivePeak);
  EXPECT_EQ(CodeOf([] { BoundsFromPeaks(1.0, -1.0, 1, 1); }),
            ErrorCode::kNonPositivePeak);
}

GTEST_TEST(ModelTest, PlantValidation) {
  MatrixXd a = -MatrixXd::Identity(2, 2);
  MatrixXd b = MatrixXd::Ones(2, 1);
  MatrixXd c(1, 2);
  c << 1, 0;
  const MatrixXd g = MatrixXd::Identity(2, 2);
  const MatrixXd h = MatrixXd::Identity(1, 1);
  const LtiPlant p = MakePlant(a, b, c, g, h);
  EXPECT_EQ(p.nx(), 2);
  EXPECT_EQ(p.ny(), 1);
  EXPECT_EQ(CodeOf([&] { MakePlant(a, b, c, g, MatrixXd::Identity(2, 2)); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([&] { MakePlant(a, b, MatrixXd::Zero(2, 2), g,
                                   MatrixXd::Identity(2, 2)); }),
            ErrorCode::kRankDeficientC);
  MatrixXd unstable = a;
  unstable(1, 1) = 1.0;
  MatrixXd bb(2, 1);
  bb << 1, 0;
  EXPECT_EQ(CodeOf([&] { MakePlant(unstable, bb, c, g, h); }),
            ErrorCode::kNotStabilizable);
  MatrixXd nan = a;
  nan(0, 1) = std::nan("");
  EXPECT_EQ(CodeOf([&] { MakePlant(nan, b, c, g, h); }),
            ErrorCode::kNonFinite);
}

GTEST_TEST(ModelTest, CaseStudyShape) {
  const QuadTankCase qc = BuildCase();
  EXPECT_EQ(qc.plant.nx(), 4);
  EXPECT_EQ(qc.plant.ny(), 4);
  EXPECT_EQ(qc.base.nrho(), 2);
  EXPECT_EQ(qc.scenarios.size(), 5u);
  EXPECT_TRUE(IsHurwitz(qc.plant.A));
  // The PI loop ignores y3 and y4.
  EXPECT_EQ(qc.base.Dc.rightCols(2).norm(), 0.0);
  EXPECT_EQ(qc.base.Bc.rightCols(2).norm(), 0.0);
  Eigen::VectorXd ev = (qc.plant.A - qc.L * qc.plant.C).eigenvalues().real();
  std::sort(ev.data(), ev.data() + 4);
  EXPECT_NEAR(ev(0), -2.1, 1e-9);
  EXPECT_NEAR(ev(3), -2.0, 1e-9);
  QuadTankParams bad;
  bad.w_peak = 0.0;
  EXPECT_EQ(CodeOf([&] { BuildCase(bad); }), ErrorCode::kNonPositivePeak);
}

}  // namespace
}  // namespace pec
