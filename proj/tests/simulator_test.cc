#include "pec/simulator.h"

#include <sstream>

#include <gtest/gtest.h>

#include "pec/quadtank_case.h"

namespace pec {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

class SimulatorTest : public ::testing::Test {
 protected:
  QuadTankCase qc_ = BuildCase();
  // Loose threshold so the attack tests do not depend on a solved Pi.
  SymMat pi_ = SymMat(MatrixXd::Identity(4, 4) * 25.0);
};

TEST_F(SimulatorTest, RegulatesToZero) {
  SimConfig cfg;
  cfg.dt = 0.02;
  cfg.horizon = 600.0;
  cfg.record_every = 50;
  SimInitial init;
  init.x = VectorXd::Constant(4, 1.0);
  const SimTrace tr =
      Simulate(qc_.plant, qc_.base, qc_.L, pi_, qc_.bounds, cfg, init);
  EXPECT_LT(tr.x.bottomRows(1).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_EQ(tr.rows(), 600 / 1 + 1);
}

TEST_F(SimulatorTest, MatchesAutonomousSolution) {
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 20.0;
  SimInitial init;
  init.x = VectorXd::Constant(4, 0.5);
  const SimTrace tr =
      Simulate(qc_.plant, qc_.base, qc_.L, pi_, qc_.bounds, cfg, init);
  const MatrixXd m = InterconnectionMatrix(qc_.plant, qc_.base, qc_.L);
  VectorXd z0 = VectorXd::Zero(10);
  z0.head(4) = init.x;
  const MatrixXd auto_tr = SimulateAutonomous(m, z0, cfg.dt, 2000);
  EXPECT_LT((auto_tr.leftCols(4) - tr.x).cwiseAbs().maxCoeff(), 1e-12);
  // Exact solution through the matrix exponential at t = 20.
  Eigen::EigenSolver<MatrixXd> es(m * 20.0);
  const Eigen::MatrixXcd v = es.eigenvectors();
  const Eigen::MatrixXcd d = es.eigenvalues().array().exp().matrix().asDiagonal();
  const VectorXd exact = (v * d * v.inverse()).real() * z0;
  EXPECT_LT((auto_tr.bottomRows(1).transpose() - exact).norm(), 1e-8);
}

TEST_F(SimulatorTest, Deterministic) {
  SimConfig cfg;
  cfg.dt = 0.02;
  cfg.horizon = 50.0;
  cfg.disturbance = DisturbanceMode::kBoundaryRandom;
  cfg.seed = 99;
  cfg.attack = StealthyFdi{{1}, 20.0, 0.1, 0.25, true};
  std::ostringstream a, b;
  WriteTraceCsv(Simulate(qc_.plant, qc_.base, qc_.L, pi_, qc_.bounds, cfg),
                a);
  WriteTraceCsv(Simulate(qc_.plant, qc_.base, qc_.L, pi_, qc_.bounds, cfg),
                b);
  EXPECT_EQ(a.str(), b.str());
  cfg.seed = 100;
  std::ostringstream c;
  WriteTraceCsv(Simulate(qc_.plant, qc_.base, qc_.L, pi_, qc_.bounds, cfg),
                c);
  EXPECT_NE(a.str(), c.str());
}

TEST_F(SimulatorTest, GuardKeepsAttackStealthy) {
  SimConfig cfg;
  cfg.dt = 0.02;
  cfg.horizon = 100.0;
  cfg.disturbance = DisturbanceMode::kBoundaryRandom;
  cfg.attack = StealthyFdi{{1, 4}, 30.0, 10.0, 0.25, true};
  const SimTrace guarded =
      Simulate(qc_.plant, qc_.base, qc_.L, pi_, qc_.bounds, cfg);
  EXPECT_EQ(guarded.alarm_count, 0);
  EXPECT_LE(guarded.max_stealth, 1.0 + 1e-9);
  cfg.attack->guard = false;
  const SimTrace loud =
      Simulate(qc_.plant, qc_.base, qc_.L, pi_, qc_.bounds, cfg);
  EXPECT_GT(loud.alarm_count, 0);
  // No injection before the onset.
  for (int k = 0; k < guarded.rows() && guarded.time(k) < 30.0; ++k) {
    EXPECT_EQ(guarded.delta.row(k).norm(), 0.0);
  }
}

TEST_F(SimulatorTest, AttackSetsResidualOnAttackedChannel) {
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 40.0;
  cfg.attack = StealthyFdi{{4}, 10.0, 0.05, 0.5, true};
  const SimTrace tr =
      Simulate(qc_.plant, qc_.base, qc_.L, pi_, qc_.bounds, cfg);
  for (int k = 0; k < tr.rows(); ++k) {
    if (tr.time(k) < 10.0) continue;
    EXPECT_NEAR(tr.r(k, 3), 0.05 * std::sin(0.5 * tr.time(k)), 1e-12);
  }
}

TEST_F(SimulatorTest, RejectsLargeStep) {
  SimConfig cfg;
  cfg.dt = 1.0;
  try {
    Simulate(qc_.plant, qc_.base, qc_.L, pi_, qc_.bounds, cfg);
    FAIL();
  } catch (const PecError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStepTooLarge);
  }
}

TEST_F(SimulatorTest, CsvLayout) {
  SimConfig cfg;
  cfg.dt = 0.025;
  cfg.horizon = 1.0;
  std::ostringstream os;
  WriteTraceCsv(Simulate(qc_.plant, qc_.base, qc_.L, pi_, qc_.bounds, cfg),
                os);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "time,x1,x2,x3,x4,u1,u2,r1,r2,r3,r4,stealth,alarm");
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 41);
}

TEST_F(SimulatorTest, EnvelopeSerialMatchesParallel) {
  const MatrixXd a = qc_.plant.A - qc_.L * qc_.plant.C;
  const std::vector<InputChannel> ch{{qc_.plant.G, qc_.bounds.W_w},
                                     {-qc_.L * qc_.plant.H, qc_.bounds.W_v}};
  EnvelopeConfig cfg = DefaultEnvelopeConfig(a, 64, 5);
  const SymMat p = SymMat::Identity(4);
  const double s = MonteCarloEnvelope(a, ch, p, cfg, Execution::kSerial);
  const double q = MonteCarloEnvelope(a, ch, p, cfg, Execution::kParallel, 3);
  EXPECT_EQ(s, q);
  EXPECT_GT(s, 0.0);
}

GTEST_TEST(SimulatorSampling, BoundarySamplesLieOnEllipsoid) {
  MatrixXd w(2, 2);
  w << 4, 1, 1, 3;
  const SymMat ws(w);
  for (int i = 0; i < 50; ++i) {
    const VectorXd x = SampleEllipsoidBoundary(ws, 1, i);
    EXPECT_NEAR(x.dot(w * x), 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace pec
