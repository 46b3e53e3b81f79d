#include "pec/synthesis.h"

namespace pec {

namespace {

void CheckInputs(const SynthesisInputs& in) {
  if (!in.base || !in.tp || !in.bounds || !in.detector || !in.error_set ||
      !in.scenario) {
    throw PecError(ErrorCode::kDimensionMismatch, "synthesis input missing");
  }
  if (in.error_set->program != ProgramId::kDetectorErrorSet ||
      in.error_set->sensors != in.scenario->sensors) {
    throw PecError(ErrorCode::kCertificateMismatch,
                   "error set was computed for " +
                       SensorLabel(in.error_set->sensors) + ", not " +
                       SensorLabel(in.scenario->sensors));
  }
}

}  // namespace

LmiProgram SynthesisProgram(const SynthesisInputs& in, double alpha,
                            bool optimize_f) {
  CheckInputs(in);
  if (!(alpha >= 0.0)) {
    throw PecError(ErrorCode::kDimensionMismatch, "alpha must be >= 0");
  }
  const TransformedPlant& tp = *in.tp;
  const AttackScenario& sc = *in.scenario;
  const AffineLoopPieces pc = LoopPieces(*in.base, tp);
  const Eigen::MatrixXd acl = ClosedLoopMatrix(*in.base, tp);
  if (!IsHurwitz(acl)) {
    throw PecError(ErrorCode::kNotStable, "closed-loop matrix not Hurwitz");
  }
  const int nz = static_cast<int>(acl.rows());
  const int nx = tp.nx();
  const int ny = tp.ny();
  const int nw = static_cast<int>(tp.Gbar.cols());
  const int nv = static_cast<int>(tp.H.cols());
  const int p = static_cast<int>(pc.K.cols());

  const Eigen::MatrixXd proj = sc.Projector();
  const Eigen::MatrixXd nvm =
      (Eigen::MatrixXd::Identity(ny, ny) - proj) * tp.H;
  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(ny, nx);
  sel.leftCols(ny).setIdentity();
  const Eigen::MatrixXd proj_e = proj * sel;

  LmiProgram prog;
  const int y = prog.AddSymmetric("Y", nz, true);
  const int th = optimize_f && p > 0 ? prog.AddMatrix("Theta", in.base->nrho(), p)
                                     : -1;
  const int bw = prog.AddScalar("beta_w", true);
  const int bv = prog.AddScalar("beta_v", true);
  const int be = prog.AddScalar("beta_e", true);
  const int br = prog.AddScalar("beta_r", true);

  // kappa = (zeta, w, v, ebar, r, 1) after congruence with diag(Y, I).
  BlockLmi& m = prog.AddConstraint("closed-loop invariance",
                                   {nz, nw, nv, nx, ny, 1});
  const Eigen::MatrixXd iz = Eigen::MatrixXd::Identity(nz, nz);
  m.AddTerm(0, 0, -acl, y, iz);
  m.AddTerm(0, 0, -0.5 * alpha * iz, y, iz);

  // Each measurement-driven channel is -Phi(Theta) M for some M; Phi is
  // affine: Phi0 + Lc Theta K' + Erho Theta K' A11.
  auto add_phi_channel = [&](int block, const Eigen::MatrixXd& mm) {
    m.AddConstant(0, block, -pc.Phi0 * mm);
    if (th < 0) return;
    const Eigen::MatrixXd kt = pc.K.transpose();
    m.AddTerm(0, block, -pc.Lc, th, kt * mm);
    m.AddTerm(0, block, -pc.Erho, th, kt * pc.A11 * mm);
  };
  m.AddConstant(0, 1, -pc.G0);
  if (th >= 0) m.AddTerm(0, 1, pc.Erho, th, pc.K.transpose() * pc.G1);
  add_phi_channel(2, nvm);
  add_phi_channel(3, -proj_e);
  add_phi_channel(4, proj);

  m.AddScalarTerm(1, 1, in.bounds->W_w.matrix(), bw);
  m.AddScalarTerm(2, 2, in.bounds->W_v.matrix(), bv);
  m.AddScalarTerm(3, 3, in.error_set->P.matrix(), be);
  m.AddScalarTerm(4, 4, in.detector->Pi.matrix(), br);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  m.AddConstant(5, 5, alpha * one);
  for (int b : {bw, bv, be, br}) m.AddScalarTerm(5, 5, -one, b);

  prog.MinimizeTrace(y);
  return prog;
}

namespace {

GridOutcome RunGrid(const SynthesisInputs& in,
                    const std::vector<double>& alpha_grid, bool optimize_f,
                    const SolverOptions& opts, Execution exec, int jobs) {
  std::vector<std::vector<double>> grid;
  for (double a : alpha_grid) grid.push_back({a});
  return GridSearch(
      [&](const std::vector<double>& a) {
        return SynthesisProgram(in, a[0], optimize_f);
      },
      grid, opts, exec, jobs);
}

}  // namespace

double BaselineTrace(const SynthesisInputs& in,
                     const std::vector<double>& alpha_grid,
                     const SolverOptions& opts, Execution exec, int jobs) {
  CheckInputs(in);
  return RunGrid(in, alpha_grid, false, opts, exec, jobs).best.objective;
}

SynthesisResult Synthesize(const SynthesisInputs& in,
                           const std::vector<double>& alpha_grid,
                           const SolverOptions& opts, Execution exec,
                           int jobs) {
  CheckInputs(in);
  const GridOutcome base = RunGrid(in, alpha_grid, false, opts, exec, jobs);
  const GridOutcome opt = RunGrid(in, alpha_grid, true, opts, exec, jobs);

  const LmiProgram prog = SynthesisProgram(in, opt.best_point[0], true);
  SynthesisResult r;
  r.sensors = in.scenario->sensors;
  const int nr = in.base->nrho();
  const Eigen::MatrixXd k = RealizationKernel(*in.tp);
  r.Theta = Eigen::MatrixXd::Zero(nr, k.cols());
  for (size_t s = 0; s < prog.slots().size(); ++s) {
    if (prog.slots()[s].name == "Theta") r.Theta = opt.best.value(s);
  }
  r.realization = Realize(*in.base, *in.tp, r.Theta);
  r.F_star = r.realization.F;
  r.Y = SymMat(opt.best.value(prog.SlotIndex("Y")));
  const Eigen::MatrixXd yinv = r.Y.matrix().inverse();
  r.P = SymMat(0.5 * (yinv + yinv.transpose()));
  r.trace_opt = opt.best.objective;
  r.alpha = opt.best_point[0];
  for (const char* name : {"beta_w", "beta_v", "beta_e", "beta_r"}) {
    r.beta[name] = opt.best.scalar(prog.SlotIndex(name));
  }
  r.min_certificate = opt.best.min_certificate;

  const LmiProgram bprog = SynthesisProgram(in, base.best_point[0], false);
  r.trace_base = base.best.objective;
  r.alpha_base = base.best_point[0];
  r.Y_base = SymMat(base.best.value(bprog.SlotIndex("Y")));
  r.min_certificate_base = base.best.min_certificate;
  return r;
}

}  // namespace pec
