#include "pec/pec_realization.h"

#include <cmath>
#include <string>

namespace pec {

TransformedPlant TransformPlant(const LtiPlant& plant) {
  const int n = plant.nx();
  const int ny = plant.ny();
  if (Rank(plant.C) != ny) {
    throw PecError(ErrorCode::kRankDeficientC, "C must have full row rank");
  }
  TransformedPlant tp;
  tp.T2 = NullBasis(plant.C).transpose();
  tp.T.resize(n, n);
  tp.T.topRows(ny) = plant.C;
  tp.T.bottomRows(n - ny) = tp.T2;
  if (std::abs(tp.T.determinant()) <= 1e-9) {
    throw PecError(ErrorCode::kRankDeficientC, "transform is singular");
  }
  tp.Tinv = tp.T.inverse();
  tp.Abar = tp.T * plant.A * tp.Tinv;
  tp.Bbar = tp.T * plant.B;
  tp.Gbar = tp.T * plant.G;
  tp.Cbar = plant.C * tp.Tinv;
  tp.H = plant.H;

  const int n2 = n - ny;
  tp.A11 = tp.Abar.topLeftCorner(ny, ny);
  tp.A12 = tp.Abar.topRightCorner(ny, n2);
  tp.A21 = tp.Abar.bottomLeftCorner(n2, ny);
  tp.A22 = tp.Abar.bottomRightCorner(n2, n2);
  tp.B1 = tp.Bbar.topRows(ny);
  tp.B2 = tp.Bbar.bottomRows(n2);
  tp.G1 = tp.Gbar.topRows(ny);
  tp.G2 = tp.Gbar.bottomRows(n2);
  return tp;
}

namespace {

double KernelTol(const TransformedPlant& tp) {
  if (tp.A12.size() == 0) return 1e-9;
  return std::max(1e-12, DefaultRankTol(tp.A12));
}

void CheckKernel(const TransformedPlant& tp,
                 const Eigen::Ref<const Eigen::MatrixXd>& f) {
  if (tp.A12.cols() == 0) return;
  const double viol = (f * tp.A12).cwiseAbs().maxCoeff();
  if (viol > 1e-8) {
    throw PecError(ErrorCode::kKernelViolation,
                   "max |F A12| = " + std::to_string(viol));
  }
}

}  // namespace

int PecDim(const TransformedPlant& tp) {
  return static_cast<int>(RealizationKernel(tp).cols());
}

Eigen::MatrixXd RealizationKernel(const TransformedPlant& tp) {
  return LeftNullBasis(tp.A12, KernelTol(tp));
}

PecRealization Realize(const BaseController& base, const TransformedPlant& tp,
                       const Eigen::Ref<const Eigen::MatrixXd>& theta) {
  const Eigen::MatrixXd k = RealizationKernel(tp);
  if (theta.rows() != base.nrho() || theta.cols() != k.cols()) {
    throw PecError(ErrorCode::kDimensionMismatch,
                   "Theta must be n_rho x p = " + std::to_string(base.nrho()) +
                       " x " + std::to_string(k.cols()));
  }
  CheckFinite(theta, "Theta");
  PecRealization out;
  out.K = k;
  out.Theta = theta;
  out.F = theta * k.transpose();
  const Eigen::MatrixXd& f = out.F;
  const Eigen::MatrixXd fb1 = f * tp.B1;
  out.realized.Ac = base.Ac + fb1 * base.Cc;
  out.realized.Bc = base.Bc - base.Ac * f + f * tp.A11 + fb1 * base.Dc -
                    fb1 * base.Cc * f;
  out.realized.Cc = base.Cc;
  out.realized.Dc = base.Dc - base.Cc * f;
  return out;
}

PecRealization RealizeFromF(const BaseController& base,
                            const TransformedPlant& tp,
                            const Eigen::Ref<const Eigen::MatrixXd>& f) {
  if (f.rows() != base.nrho() || f.cols() != tp.ny()) {
    throw PecError(ErrorCode::kDimensionMismatch, "F must be n_rho x n_y");
  }
  CheckFinite(f, "F");
  CheckKernel(tp, f);
  const Eigen::MatrixXd k = RealizationKernel(tp);
  return Realize(base, tp, f * k);
}

Eigen::MatrixXd MeasurementMap(const BaseController& base,
                               const TransformedPlant& tp,
                               const Eigen::Ref<const Eigen::MatrixXd>& f) {
  const int nx = tp.nx();
  const int ny = tp.ny();
  const int nr = base.nrho();
  const Eigen::MatrixXd dcf = base.Dc - base.Cc * f;
  Eigen::MatrixXd phi(nx + nr, ny);
  phi.topRows(ny) = tp.B1 * dcf;
  phi.middleRows(ny, nx - ny) = tp.B2 * dcf;
  phi.bottomRows(nr) = base.Bc - base.Ac * f + f * tp.A11;
  return phi;
}

Eigen::MatrixXd ClosedLoopMatrix(const BaseController& base,
                                 const TransformedPlant& tp) {
  const int nx = tp.nx();
  const int ny = tp.ny();
  const int nr = base.nrho();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nx + nr, nx + nr);
  a.topLeftCorner(nx, nx) = tp.Abar;
  a.block(0, 0, nx, ny) += tp.Bbar * base.Dc;
  a.topRightCorner(nx, nr) = tp.Bbar * base.Cc;
  a.block(nx, 0, nr, ny) = base.Bc;
  a.bottomRightCorner(nr, nr) = base.Ac;
  return a;
}

ClosedLoop AssembleClosedLoop(const BaseController& base,
                              const TransformedPlant& tp,
                              const Eigen::Ref<const Eigen::MatrixXd>& f,
                              const AttackScenario& sc) {
  if (f.rows() != base.nrho() || f.cols() != tp.ny() ||
      sc.Gamma.rows() != tp.ny()) {
    throw PecError(ErrorCode::kDimensionMismatch, "closed-loop dims");
  }
  CheckKernel(tp, f);
  ClosedLoop cl;
  cl.Acl = ClosedLoopMatrix(base, tp);
  if (!IsHurwitz(cl.Acl)) {
    throw PecError(ErrorCode::kNotStable, "closed-loop matrix not Hurwitz");
  }
  const int nx = tp.nx();
  const int nr = base.nrho();
  cl.Gcl.resize(nx + nr, tp.Gbar.cols());
  cl.Gcl.topRows(nx) = tp.Gbar;
  cl.Gcl.bottomRows(nr) = -f * tp.G1;
  const Eigen::MatrixXd phi = MeasurementMap(base, tp, f);
  cl.Hcl = phi * tp.H;
  cl.Tcl = phi * sc.Gamma;
  return cl;
}

AffineLoopPieces LoopPieces(const BaseController& base,
                            const TransformedPlant& tp) {
  const int nx = tp.nx();
  const int ny = tp.ny();
  const int nr = base.nrho();
  AffineLoopPieces pc;
  pc.Phi0 = MeasurementMap(base, tp, Eigen::MatrixXd::Zero(nr, ny));
  pc.Lc.resize(nx + nr, nr);
  pc.Lc.topRows(ny) = -tp.B1 * base.Cc;
  pc.Lc.middleRows(ny, nx - ny) = -tp.B2 * base.Cc;
  pc.Lc.bottomRows(nr) = -base.Ac;
  pc.Erho = Eigen::MatrixXd::Zero(nx + nr, nr);
  pc.Erho.bottomRows(nr).setIdentity();
  pc.K = RealizationKernel(tp);
  pc.A11 = tp.A11;
  pc.G0 = Eigen::MatrixXd::Zero(nx + nr, tp.Gbar.cols());
  pc.G0.topRows(nx) = tp.Gbar;
  pc.G1 = tp.G1;
  return pc;
}

ResidualDrivenLoop DetectorErrorForm(const Eigen::Ref<const Eigen::MatrixXd>& l,
                                     const TransformedPlant& tp,
                                     const AttackScenario& sc) {
  const int nx = tp.nx();
  const int ny = tp.ny();
  if (l.rows() != nx || l.cols() != ny) {
    throw PecError(ErrorCode::kDimensionMismatch, "L dims");
  }
  ResidualDrivenLoop rd;
  rd.Lbar = tp.T * l;
  const Eigen::MatrixXd proj = sc.Projector();
  const Eigen::MatrixXd comp = Eigen::MatrixXd::Identity(ny, ny) - proj;
  rd.Ae = tp.Abar;
  rd.Ae.leftCols(ny) -= rd.Lbar * comp;
  if (!IsHurwitz(rd.Ae)) {
    throw PecError(ErrorCode::kDetectorUnstable,
                   "error dynamics under attack " + SensorLabel(sc.sensors) +
                       " are not Hurwitz");
  }
  rd.Ge = tp.Gbar;
  rd.Lv = -rd.Lbar * comp * tp.H;
  rd.Lr = -rd.Lbar * proj;
  return rd;
}

ResidualDrivenLoop ResidualDrivenForm(const ClosedLoop& cl,
                                      const Detector& det,
                                      const TransformedPlant& tp,
                                      const AttackScenario& sc) {
  ResidualDrivenLoop rd = DetectorErrorForm(det.L, tp, sc);
  const int nz = cl.nzeta();
  const int nx = tp.nx();
  const int ny = tp.ny();
  const Eigen::MatrixXd tg = cl.Tcl * sc.Gamma_pinv;
  rd.Acl = cl.Acl;
  rd.Gw = cl.Gcl;
  rd.Bv = cl.Hcl - tg * tp.H;
  rd.Br = tg;
  rd.Be = Eigen::MatrixXd::Zero(nz, nx);
  rd.Be.leftCols(ny) = -tg;
  return rd;
}

Eigen::VectorXd RecoverAttack(const AttackScenario& sc,
                              const Eigen::Ref<const Eigen::MatrixXd>& h,
                              const Eigen::Ref<const Eigen::VectorXd>& r,
                              const Eigen::Ref<const Eigen::VectorXd>& ebar1,
                              const Eigen::Ref<const Eigen::VectorXd>& v) {
  return sc.Gamma_pinv * (r - ebar1 - h * v);
}

}  // namespace pec
