#include "pec/synthesis.h"

#include <gtest/gtest.h>

#include "case_fixture.h"
#include "pec/simulator.h"

namespace pec {
namespace {

using Eigen::MatrixXd;
using testing::Artifacts;
using testing::Scenario;

GTEST_TEST(SynthesisTest, OptimizedNeverWorse) {
  for (const std::vector<int>& s : {std::vector<int>{1}, {4}}) {
    const SynthesisResult& r = Scenario(s).synthesis;
    EXPECT_LE(r.trace_opt, r.trace_base) << SensorLabel(s);
    EXPECT_GE(r.min_certificate, -1e-6);
    EXPECT_GE(r.min_certificate_base, -1e-6);
  }
}

GTEST_TEST(SynthesisTest, SensorFourLeavesUnusedColumnsAlone) {
  const MatrixXd& f = Scenario({4}).synthesis.F_star;
  EXPECT_LE(f.col(1).cwiseAbs().maxCoeff(), 1e-2);
  EXPECT_LE(f.col(3).cwiseAbs().maxCoeff(), 1e-2);
}

GTEST_TEST(SynthesisTest, CertificateMismatchRejected) {
  const testing::CaseArtifacts& art = Artifacts();
  const ScenarioOutcome& one = Scenario({1});
  const AttackScenario other = MakeScenario(4, {4});
  const Detector det{art.qc.L, art.residual.Pi};
  const SynthesisInputs in{&art.qc.base, &art.tp, &art.qc.bounds,
                           &det, &one.error_set, &other};
  try {
    Synthesize(in, {1.0});
    FAIL();
  } catch (const PecError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCertificateMismatch);
  }
}

// zeta and ebar together, with zeta' P zeta checked.
GTEST_TEST(SynthesisTest, ClosedLoopContainment) {
  const testing::CaseArtifacts& art = Artifacts();
  for (const std::vector<int>& s : {std::vector<int>{1}, {4}}) {
    const SynthesisResult& r = Scenario(s).synthesis;
    const AttackScenario sc = MakeScenario(4, s);
    const ClosedLoop cl =
        AssembleClosedLoop(art.qc.base, art.tp, r.F_star, sc);
    const Detector det{art.qc.L, art.residual.Pi};
    const ResidualDrivenLoop rd = ResidualDrivenForm(cl, det, art.tp, sc);
    const int nz = cl.nzeta();
    const int ne = static_cast<int>(rd.Ae.rows());
    MatrixXd a = MatrixXd::Zero(nz + ne, nz + ne);
    a.topLeftCorner(nz, nz) = rd.Acl;
    a.topRightCorner(nz, ne) = rd.Be;
    a.bottomRightCorner(ne, ne) = rd.Ae;
    auto stack = [](const MatrixXd& top, const MatrixXd& bottom) {
      MatrixXd m(top.rows() + bottom.rows(), top.cols());
      m << top, bottom;
      return m;
    };
    const std::vector<InputChannel> ch{
        {stack(rd.Gw, rd.Ge), art.qc.bounds.W_w},
        {stack(rd.Bv, rd.Lv), art.qc.bounds.W_v},
        {stack(rd.Br, rd.Lr), art.residual.Pi}};
    MatrixXd p = MatrixXd::Zero(nz + ne, nz + ne);
    p.topLeftCorner(nz, nz) = r.P.matrix();
    const EnvelopeConfig cfg = DefaultEnvelopeConfig(a, 200, 13);
    const double env = MonteCarloEnvelope(a, ch, SymMat(p), cfg);
    EXPECT_LE(env, 1.0 + 1e-2) << SensorLabel(s);
  }
}

}  // namespace
}  // namespace pec
