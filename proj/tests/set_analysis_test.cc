#include "pec/set_analysis.h"

#include <gtest/gtest.h>

#include "case_fixture.h"
#include "pec/simulator.h"

namespace pec {
namespace {

using Eigen::MatrixXd;
using testing::Artifacts;
using testing::CoarseOptions;
using testing::Scenario;

// x' = -x + w, |w| <= 1: the reachable set is exactly [-1, 1].
LmiProgram ScalarProgram(double alpha) {
  LmiProgram prog;
  const int p = prog.AddSymmetric("P", 1, true);
  const int b = prog.AddScalar("beta", true);
  BlockLmi& m = prog.AddConstraint("invariance", {1, 1, 1});
  const MatrixXd one = MatrixXd::Ones(1, 1);
  m.AddTerm(0, 0, (1.0 - 0.5 * alpha) * one, p, one);
  m.AddTerm(0, 1, -one, p, one);
  m.AddScalarTerm(1, 1, one, b);
  m.AddConstant(2, 2, alpha * one);
  m.AddScalarTerm(2, 2, -one, b);
  prog.MinimizeNegLogDet(p);
  return prog;
}

GTEST_TEST(SetAnalysisTest, ScalarAnalyticSet) {
  std::vector<std::vector<double>> grid;
  for (double a : LinSpace(0.25, 1.75, 7)) grid.push_back({a});
  const GridOutcome g = GridSearch(
      [](const std::vector<double>& pt) { return ScalarProgram(pt[0]); },
      grid, {});
  EXPECT_DOUBLE_EQ(g.best_point[0], 1.0);
  const double p = g.best.value(0)(0, 0);
  EXPECT_NEAR(p, 1.0, 1e-6);

  const MatrixXd a = -MatrixXd::Ones(1, 1);
  const std::vector<InputChannel> ch{
      {MatrixXd::Ones(1, 1), SymMat::Identity(1)}};
  EnvelopeConfig cfg = DefaultEnvelopeConfig(a, 500, 3);
  const double env =
      MonteCarloEnvelope(a, ch, SymMat(MatrixXd::Constant(1, 1, p)), cfg);
  EXPECT_LE(env, 1.0 + 1e-3);
  EXPECT_GT(env, 0.5);
}

GTEST_TEST(SetAnalysisTest, ResidualSetTightensWithSmallerPeaks) {
  const testing::CaseArtifacts& art = Artifacts();
  EXPECT_LT(art.residual.neg_logdet_pi, 0.0);
  EXPECT_GE(art.residual.Pe.min_certificate, -1e-6);
  QuadTankParams half;
  half.w_peak *= 0.5;
  half.v_peak *= 0.5;
  const ModelFile m = ModelFromCase(BuildCase(half));
  const ResidualSetResult rs = RunResidualSet(m, CoarseOptions());
  // Smaller disturbances: a smaller residual ellipsoid, larger log det(Pi).
  EXPECT_LT(rs.neg_logdet_pi, art.residual.neg_logdet_pi);
}

GTEST_TEST(SetAnalysisTest, CertificatesRecheck) {
  const testing::CaseArtifacts& art = Artifacts();
  const LmiProgram prog = ResidualSetProgram(
      art.qc.plant, art.qc.bounds, art.qc.L, art.residual.alpha_e,
      art.residual.alpha_r);
  Assignment v = ZeroAssignment(prog);
  v[prog.SlotIndex("P_e")] = art.residual.Pe.P.matrix();
  v[prog.SlotIndex("Pi")] = art.residual.Pi.matrix();
  for (const char* name : {"beta_e_w", "beta_e_v", "beta_r_v"}) {
    v[prog.SlotIndex(name)] =
        MatrixXd::Constant(1, 1, art.residual.Pe.beta.at(name));
  }
  for (double c : VerifyCertificate(prog, v)) EXPECT_GE(c, -1e-6);
}

// Detector error driven by w, v and a residual kept inside Pi.
GTEST_TEST(SetAnalysisTest, DetectorErrorContainment) {
  const testing::CaseArtifacts& art = Artifacts();
  for (const std::vector<int>& s : {std::vector<int>{1}, {4}}) {
    const ScenarioOutcome& so = Scenario(s);
    const AttackScenario sc = MakeScenario(4, s);
    const ResidualDrivenLoop rd = DetectorErrorForm(art.qc.L, art.tp, sc);
    const std::vector<InputChannel> ch{{rd.Ge, art.qc.bounds.W_w},
                                       {rd.Lv, art.qc.bounds.W_v},
                                       {rd.Lr, art.residual.Pi}};
    const EnvelopeConfig cfg = DefaultEnvelopeConfig(rd.Ae, 200, 9);
    const double env = MonteCarloEnvelope(rd.Ae, ch, so.error_set.P, cfg);
    EXPECT_LE(env, 1.0 + 1e-2) << SensorLabel(s);
  }
}

GTEST_TEST(SetAnalysisTest, ErrorSetOrderingSingleSensors) {
  // Attacking sensor 4, which the base loop ignores, leaves a smaller error
  // set than attacking sensor 1.
  EXPECT_LT(Scenario({4}).error_set.objective,
            Scenario({1}).error_set.objective);
}

}  // namespace
}  // namespace pec
