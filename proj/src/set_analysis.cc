#include "pec/set_analysis.h"

namespace pec {

const char* ProgramName(ProgramId id) {
  switch (id) {
    case ProgramId::kResidualSet: return "ResidualSet";
    case ProgramId::kDetectorErrorSet: return "DetectorErrorSet";
    case ProgramId::kClosedLoopSet: return "ClosedLoopSet";
  }
  return "Unknown";
}

namespace {

Eigen::MatrixXd Eye(int n) { return Eigen::MatrixXd::Identity(n, n); }

Eigen::MatrixXd One() { return Eigen::MatrixXd::Ones(1, 1); }

void RequireOptimal(const SdpSolution& sol, const std::string& what) {
  if (sol.status == SolveStatus::kInfeasible) {
    throw PecError(ErrorCode::kInfeasible, what + ": " + sol.message);
  }
  if (!sol.ok()) {
    throw PecError(ErrorCode::kNumericalTrouble, what + ": " + sol.message);
  }
}

ResidualSetResult ResidualFromSolution(const LmiProgram& prog,
                                       const SdpSolution& sol, double alpha_e,
                                       double alpha_r) {
  const int pe = prog.SlotIndex("P_e");
  const int pi = prog.SlotIndex("Pi");
  ResidualSetResult out;
  out.alpha_e = alpha_e;
  out.alpha_r = alpha_r;
  out.Pe.program = ProgramId::kResidualSet;
  out.Pe.P = SymMat(sol.value(pe));
  out.Pe.alpha = alpha_e;
  out.Pe.beta = {{"beta_e_w", sol.scalar(prog.SlotIndex("beta_e_w"))},
                 {"beta_e_v", sol.scalar(prog.SlotIndex("beta_e_v"))},
                 {"beta_r_v", sol.scalar(prog.SlotIndex("beta_r_v"))},
                 {"alpha_r", alpha_r}};
  out.Pe.min_certificate = sol.min_certificate;
  out.Pi = SymMat(sol.value(pi));
  out.neg_logdet_pe = -LogDetSpd(out.Pe.P.matrix());
  out.neg_logdet_pi = -LogDetSpd(out.Pi.matrix());
  out.objective = sol.objective;
  out.Pe.objective = sol.objective;
  return out;
}

}  // namespace

std::vector<double> DefaultAlphaGrid() { return LogSpace(1e-2, 1e1, 30); }

std::vector<double> DefaultAlphaRGrid() { return LinSpace(0.05, 0.95, 19); }

LmiProgram ResidualSetProgram(const LtiPlant& plant,
                              const DisturbanceBounds& bounds,
                              const Eigen::Ref<const Eigen::MatrixXd>& l,
                              double alpha_e, double alpha_r) {
  if (!(alpha_e >= 0.0) || !(alpha_r >= 0.0)) {
    throw PecError(ErrorCode::kDimensionMismatch, "alpha must be >= 0");
  }
  const int nx = plant.nx();
  const int nw = plant.nw();
  const int nv = plant.nv();
  const int ny = plant.ny();
  const Eigen::MatrixXd ae = plant.A - l * plant.C;
  if (!IsHurwitz(ae)) {
    throw PecError(ErrorCode::kDetectorUnstable, "A - L C is not Hurwitz");
  }
  LmiProgram prog;
  const int pe = prog.AddSymmetric("P_e", nx, true);
  const int pi = prog.AddSymmetric("Pi", ny, true);
  const int bw = prog.AddScalar("beta_e_w", true);
  const int bv = prog.AddScalar("beta_e_v", true);
  const int brv = prog.AddScalar("beta_r_v", true);

  // kappa = (e, w, v, 1)
  BlockLmi& inv = prog.AddConstraint("error invariance", {nx, nw, nv, 1});
  inv.AddTerm(0, 0, -Eye(nx), pe, ae);
  inv.AddTerm(0, 0, -0.5 * alpha_e * Eye(nx), pe, Eye(nx));
  inv.AddTerm(0, 1, -Eye(nx), pe, plant.G);
  inv.AddTerm(0, 2, Eye(nx), pe, l * plant.H);
  inv.AddScalarTerm(1, 1, bounds.W_w.matrix(), bw);
  inv.AddScalarTerm(2, 2, bounds.W_v.matrix(), bv);
  inv.AddConstant(3, 3, alpha_e * One());
  inv.AddScalarTerm(3, 3, -One(), bw);
  inv.AddScalarTerm(3, 3, -One(), bv);

  // r = C e + H v stays in {r' Pi r <= 1} whenever e is in the error set.
  BlockLmi& res = prog.AddConstraint("residual bound", {nx, nw, nv, 1});
  res.AddTerm(0, 0, -0.5 * plant.C.transpose(), pi, plant.C);
  res.AddTerm(0, 0, 0.5 * alpha_r * Eye(nx), pe, Eye(nx));
  res.AddTerm(0, 2, -plant.C.transpose(), pi, plant.H);
  res.AddTerm(2, 2, -0.5 * plant.H.transpose(), pi, plant.H);
  res.AddScalarTerm(2, 2, bounds.W_v.matrix(), brv);
  res.AddConstant(3, 3, (1.0 - alpha_r) * One());
  res.AddScalarTerm(3, 3, -One(), brv);

  prog.MinimizeNegLogDet(pe);
  prog.MinimizeNegLogDet(pi);
  return prog;
}

ResidualSetResult ResidualSet(const LtiPlant& plant,
                              const DisturbanceBounds& bounds,
                              const Eigen::Ref<const Eigen::MatrixXd>& l,
                              double alpha_e, double alpha_r,
                              const SolverOptions& opts) {
  const LmiProgram prog =
      ResidualSetProgram(plant, bounds, l, alpha_e, alpha_r);
  const SdpSolution sol = Solve(prog, opts);
  RequireOptimal(sol, "residual set");
  return ResidualFromSolution(prog, sol, alpha_e, alpha_r);
}

ResidualSetResult ResidualSetSearch(const LtiPlant& plant,
                                    const DisturbanceBounds& bounds,
                                    const Eigen::Ref<const Eigen::MatrixXd>& l,
                                    const std::vector<double>& alpha_e_grid,
                                    const std::vector<double>& alpha_r_grid,
                                    const SolverOptions& opts, Execution exec,
                                    int jobs) {
  const Eigen::MatrixXd lc = l;
  const auto grid = GridProduct({alpha_e_grid, alpha_r_grid});
  const GridOutcome g = GridSearch(
      [&](const std::vector<double>& a) {
        return ResidualSetProgram(plant, bounds, lc, a[0], a[1]);
      },
      grid, opts, exec, jobs);
  const LmiProgram prog = ResidualSetProgram(plant, bounds, lc, g.best_point[0],
                                             g.best_point[1]);
  return ResidualFromSolution(prog, g.best, g.best_point[0], g.best_point[1]);
}

LmiProgram DetectorErrorProgram(const ResidualDrivenLoop& rd,
                                const DisturbanceBounds& bounds,
                                const SymMat& pi, double alpha) {
  if (!(alpha >= 0.0)) {
    throw PecError(ErrorCode::kDimensionMismatch, "alpha must be >= 0");
  }
  if (!IsHurwitz(rd.Ae)) {
    throw PecError(ErrorCode::kDetectorUnstable, "error dynamics not Hurwitz");
  }
  const int nx = static_cast<int>(rd.Ae.rows());
  const int nw = static_cast<int>(rd.Ge.cols());
  const int nv = static_cast<int>(rd.Lv.cols());
  const int ny = static_cast<int>(rd.Lr.cols());
  LmiProgram prog;
  const int p = prog.AddSymmetric("P_e_bar", nx, true);
  const int bw = prog.AddScalar("beta_w", true);
  const int bv = prog.AddScalar("beta_v", true);
  const int br = prog.AddScalar("beta_r", true);

  // kappa = (ebar, w, v, r, 1); ebar' = Ae ebar + Ge w + Lv v + Lr r.
  BlockLmi& m = prog.AddConstraint("error invariance", {nx, nw, nv, ny, 1});
  m.AddTerm(0, 0, -Eye(nx), p, rd.Ae);
  m.AddTerm(0, 0, -0.5 * alpha * Eye(nx), p, Eye(nx));
  m.AddTerm(0, 1, -Eye(nx), p, rd.Ge);
  m.AddTerm(0, 2, -Eye(nx), p, rd.Lv);
  m.AddTerm(0, 3, -Eye(nx), p, rd.Lr);
  m.AddScalarTerm(1, 1, bounds.W_w.matrix(), bw);
  m.AddScalarTerm(2, 2, bounds.W_v.matrix(), bv);
  m.AddScalarTerm(3, 3, pi.matrix(), br);
  m.AddConstant(4, 4, alpha * One());
  m.AddScalarTerm(4, 4, -One(), bw);
  m.AddScalarTerm(4, 4, -One(), bv);
  m.AddScalarTerm(4, 4, -One(), br);

  prog.MinimizeNegLogDet(p);
  return prog;
}

namespace {

EllipsoidCertificate ErrorFromSolution(const LmiProgram& prog,
                                       const SdpSolution& sol, double alpha,
                                       const AttackScenario& sc) {
  EllipsoidCertificate c;
  c.program = ProgramId::kDetectorErrorSet;
  c.P = SymMat(sol.value(prog.SlotIndex("P_e_bar")));
  c.alpha = alpha;
  c.beta = {{"beta_w", sol.scalar(prog.SlotIndex("beta_w"))},
            {"beta_v", sol.scalar(prog.SlotIndex("beta_v"))},
            {"beta_r", sol.scalar(prog.SlotIndex("beta_r"))}};
  c.objective = sol.objective;
  c.min_certificate = sol.min_certificate;
  c.sensors = sc.sensors;
  return c;
}

}  // namespace

EllipsoidCertificate DetectorErrorSet(const ResidualDrivenLoop& rd,
                                      const DisturbanceBounds& bounds,
                                      const SymMat& pi, double alpha,
                                      const AttackScenario& sc,
                                      const SolverOptions& opts) {
  const LmiProgram prog = DetectorErrorProgram(rd, bounds, pi, alpha);
  const SdpSolution sol = Solve(prog, opts);
  RequireOptimal(sol, "detector error set");
  return ErrorFromSolution(prog, sol, alpha, sc);
}

EllipsoidCertificate DetectorErrorSetSearch(
    const ResidualDrivenLoop& rd, const DisturbanceBounds& bounds,
    const SymMat& pi, const AttackScenario& sc,
    const std::vector<double>& alpha_grid, const SolverOptions& opts,
    Execution exec, int jobs) {
  std::vector<std::vector<double>> grid;
  for (double a : alpha_grid) grid.push_back({a});
  const GridOutcome g = GridSearch(
      [&](const std::vector<double>& a) {
        return DetectorErrorProgram(rd, bounds, pi, a[0]);
      },
      grid, opts, exec, jobs);
  const LmiProgram prog = DetectorErrorProgram(rd, bounds, pi, g.best_point[0]);
  return ErrorFromSolution(prog, g.best, g.best_point[0], sc);
}

}  // namespace pec
