#include "pec/lmi_engine.h"

#include <gtest/gtest.h>

namespace pec {
namespace {

using Eigen::MatrixXd;

// lo I <= P <= hi I for an n x n P.
LmiProgram Sandwich(int n, double lo, double hi) {
  LmiProgram prog;
  const int p = prog.AddSymmetric("P", n, true);
  const MatrixXd eye = MatrixXd::Identity(n, n);
  BlockLmi& upper = prog.AddConstraint("upper", {n});
  upper.AddConstant(0, 0, hi * eye);
  upper.AddTerm(0, 0, -0.5 * eye, p, eye);
  BlockLmi& lower = prog.AddConstraint("lower", {n});
  lower.AddConstant(0, 0, -lo * eye);
  lower.AddTerm(0, 0, 0.5 * eye, p, eye);
  return prog;
}

GTEST_TEST(LmiEngineTest, FeasibilityOnly) {
  const SdpSolution sol = Solve(Sandwich(3, 0.5, 1.0));
  ASSERT_TRUE(sol.ok()) << sol.message;
  EXPECT_EQ(sol.objective, 0.0);
  EXPECT_GE(sol.min_certificate, -1e-7);
  const double m = MinEigSym(sol.value(0));
  EXPECT_GE(m, 0.5 - 1e-7);
  EXPECT_LE(MinEigSym(MatrixXd(MatrixXd::Identity(3, 3) - sol.value(0))),
            1e-7 + 0.5);
}

GTEST_TEST(LmiEngineTest, ReversedSandwichIsInfeasible) {
  const SdpSolution sol = Solve(Sandwich(3, 1.0, 0.5));
  EXPECT_EQ(sol.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(sol.ok());
}

GTEST_TEST(LmiEngineTest, TraceAndLogDetOptima) {
  LmiProgram lo = Sandwich(2, 0.5, 1.0);
  lo.MinimizeTrace(0);
  const SdpSolution a = Solve(lo);
  ASSERT_TRUE(a.ok());
  EXPECT_NEAR(a.objective, 1.0, 1e-7);

  LmiProgram hi = Sandwich(2, 0.5, 1.0);
  hi.MinimizeNegLogDet(0);
  const SdpSolution b = Solve(hi);
  ASSERT_TRUE(b.ok());
  EXPECT_NEAR(b.objective, 0.0, 1e-7);
}

GTEST_TEST(LmiEngineTest, LyapunovDecay) {
  // Largest decay rate certificate: A' P + P A <= -alpha P has P = I at
  // alpha = 2 for A = -I; check feasibility just below and above it.
  MatrixXd a(2, 2);
  a << -1, 0.5, 0, -1;
  for (double alpha : {0.5, 1.5}) {
    LmiProgram prog;
    const int p = prog.AddSymmetric("P", 2, true);
    BlockLmi& m = prog.AddConstraint("decay", {2});
    m.AddTerm(0, 0, -a.transpose(), p, MatrixXd::Identity(2, 2));
    m.AddTerm(0, 0, -0.5 * alpha * MatrixXd::Identity(2, 2), p,
              MatrixXd::Identity(2, 2));
    BlockLmi& n = prog.AddConstraint("normalize", {2});
    n.AddTerm(0, 0, 0.5 * MatrixXd::Identity(2, 2), p,
              MatrixXd::Identity(2, 2));
    n.AddConstant(0, 0, -MatrixXd::Identity(2, 2));
    const SdpSolution sol = Solve(prog);
    ASSERT_TRUE(sol.ok()) << alpha;
    const SymMat lhs = Assemble(prog.constraints()[0], sol.values);
    EXPECT_GE(MinEigSym(lhs), -1e-7);
  }
  LmiProgram prog;
  const int p = prog.AddSymmetric("P", 2, true);
  BlockLmi& m = prog.AddConstraint("decay", {2});
  m.AddTerm(0, 0, -a.transpose(), p, MatrixXd::Identity(2, 2));
  m.AddTerm(0, 0, -1.5 * MatrixXd::Identity(2, 2), p,
            MatrixXd::Identity(2, 2));
  BlockLmi& n = prog.AddConstraint("normalize", {2});
  n.AddTerm(0, 0, 0.5 * MatrixXd::Identity(2, 2), p, MatrixXd::Identity(2, 2));
  n.AddConstant(0, 0, -MatrixXd::Identity(2, 2));
  EXPECT_EQ(Solve(prog).status, SolveStatus::kInfeasible);
}

GTEST_TEST(LmiEngineTest, AssembleMirrorsOffDiagonal) {
  LmiProgram prog;
  const int x = prog.AddMatrix("X", 1, 2);
  const int s = prog.AddScalar("s", true);
  BlockLmi& m = prog.AddConstraint("c", {1, 2});
  m.AddTerm(0, 1, MatrixXd::Ones(1, 1), x, MatrixXd::Identity(2, 2));
  m.AddScalarTerm(1, 1, MatrixXd::Identity(2, 2), s);
  m.AddConstant(0, 0, 3.0 * MatrixXd::Ones(1, 1));
  Assignment v = ZeroAssignment(prog);
  v[x] = (MatrixXd(1, 2) << 1.0, 2.0).finished();
  v[s] = 5.0 * MatrixXd::Ones(1, 1);
  const MatrixXd got = Assemble(prog.constraints()[0], v).matrix();
  MatrixXd want(3, 3);
  want << 3, 1, 2, 1, 5, 0, 2, 0, 5;
  EXPECT_LT((got - want).norm(), 1e-14);
  EXPECT_EQ(VerifyCertificate(prog, v).size(), 2u);
}

GTEST_TEST(LmiEngineTest, SerialAndParallelGridsAgree) {
  auto build = [](const std::vector<double>& pt) {
    LmiProgram prog = Sandwich(2, pt[0], 1.0);
    prog.MinimizeTrace(0);
    return prog;
  };
  std::vector<std::vector<double>> grid;
  for (double lo : LinSpace(0.1, 1.5, 8)) grid.push_back({lo});
  const GridOutcome s = GridSearch(build, grid, {}, Execution::kSerial);
  const GridOutcome p = GridSearch(build, grid, {}, Execution::kParallel, 4);
  EXPECT_EQ(s.best_index, p.best_index);
  EXPECT_EQ(s.statuses, p.statuses);
  ASSERT_EQ(s.objectives.size(), p.objectives.size());
  for (size_t i = 0; i < s.objectives.size(); ++i) {
    if (s.statuses[i] == SolveStatus::kOptimal) {
      EXPECT_EQ(s.objectives[i], p.objectives[i]);
    }
  }
  EXPECT_EQ(s.best_index, 0);
  EXPECT_EQ(s.statuses.back(), SolveStatus::kInfeasible);
}

GTEST_TEST(LmiEngineTest, AllInfeasibleThrows) {
  auto build = [](const std::vector<double>&) { return Sandwich(1, 2.0, 1.0); };
  try {
    GridSearch(build, {{0.0}, {1.0}}, {}, Execution::kSerial);
    FAIL();
  } catch (const PecError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllInfeasible);
  }
}

GTEST_TEST(LmiEngineTest, Grids) {
  const auto l = LogSpace(1e-2, 1e1, 30);
  ASSERT_EQ(l.size(), 30u);
  EXPECT_DOUBLE_EQ(l.front(), 1e-2);
  EXPECT_NEAR(l.back(), 10.0, 1e-12);
  const auto g = GridProduct({{1, 2}, {3, 4, 5}});
  ASSERT_EQ(g.size(), 6u);
  EXPECT_EQ(g[1], (std::vector<double>{1, 4}));
}

}  // namespace
}  // namespace pec
