#pragma once

#include <Eigen/Dense>

#include "pec/model.h"

namespace pec {

// Plant in coordinates xbar = T x with T = [C; T2], so that the first ny
// states are the noise-free outputs.
struct TransformedPlant {
  Eigen::MatrixXd T, T2, Tinv;
  Eigen::MatrixXd Abar, Bbar, Gbar, Cbar, H;
  Eigen::MatrixXd A11, A12, A21, A22;
  Eigen::MatrixXd B1, B2, G1, G2;

  int nx() const { return static_cast<int>(Abar.rows()); }
  int ny() const { return static_cast<int>(A11.rows()); }
};

TransformedPlant TransformPlant(const LtiPlant& plant);

// Dimension p of the left null space of A12; a PEC realization other than
// F = 0 exists iff p > 0.
int PecDim(const TransformedPlant& tp);

// Orthonormal ny x p basis of the left null space of A12.
Eigen::MatrixXd RealizationKernel(const TransformedPlant& tp);

// Controller rhobar = rho + F xbar1 with F = Theta K'.
struct PecRealization {
  Eigen::MatrixXd F, K, Theta;
  // Realized controller: rhobar' = Ac rhobar + Bc ytilde,
  // u = Cc rhobar + Dc ytilde.
  BaseController realized;
};

PecRealization Realize(const BaseController& base, const TransformedPlant& tp,
                       const Eigen::Ref<const Eigen::MatrixXd>& theta);

// Same, from F directly. Throws KernelViolation unless F A12 = 0.
PecRealization RealizeFromF(const BaseController& base,
                            const TransformedPlant& tp,
                            const Eigen::Ref<const Eigen::MatrixXd>& f);

// Closed loop in zeta = (xbar, rhobar - F xbar1):
//   zeta' = Acl zeta + Gcl w + Hcl v + Tcl delta.
struct ClosedLoop {
  Eigen::MatrixXd Acl, Gcl, Hcl, Tcl;

  int nzeta() const { return static_cast<int>(Acl.rows()); }
};

// Phi(F) = [B1 (Dc - Cc F); B2 (Dc - Cc F); Bc - Ac F + F A11], the map
// through which measurements enter zeta; Hcl = Phi H and Tcl = Phi Gamma.
Eigen::MatrixXd MeasurementMap(const BaseController& base,
                               const TransformedPlant& tp,
                               const Eigen::Ref<const Eigen::MatrixXd>& f);

// The F-independent closed-loop state matrix.
Eigen::MatrixXd ClosedLoopMatrix(const BaseController& base,
                                 const TransformedPlant& tp);

ClosedLoop AssembleClosedLoop(const BaseController& base,
                              const TransformedPlant& tp,
                              const Eigen::Ref<const Eigen::MatrixXd>& f,
                              const AttackScenario& sc);

// Affine decomposition in Theta used by the synthesis program:
//   Phi(Theta)  = Phi0 + Lc Theta K' + Erho Theta K' A11
//   Gcl(Theta)  = G0 - Erho Theta K' G1
struct AffineLoopPieces {
  Eigen::MatrixXd Phi0, Lc, Erho, K, A11, G0, G1;
};

AffineLoopPieces LoopPieces(const BaseController& base,
                            const TransformedPlant& tp);

// Closed loop and detector error driven by the residual r instead of the
// attack, using delta = Gamma^+ (r - ebar1 - H v).
struct ResidualDrivenLoop {
  Eigen::MatrixXd Acl;  // unchanged state matrix
  Eigen::MatrixXd Gw;   // Gcl
  Eigen::MatrixXd Bv;   // Hcl - Tcl Gamma^+ H
  Eigen::MatrixXd Br;   // Tcl Gamma^+
  Eigen::MatrixXd Be;   // -[Tcl Gamma^+, 0], acts on all of ebar
  // ebar' = Ae ebar + Ge w + Lv v + Lr r
  Eigen::MatrixXd Ae, Ge, Lv, Lr;
  Eigen::MatrixXd Lbar;
};

ResidualDrivenLoop ResidualDrivenForm(const ClosedLoop& cl,
                                      const Detector& det,
                                      const TransformedPlant& tp,
                                      const AttackScenario& sc);

// Detector error matrices only (no controller needed).
ResidualDrivenLoop DetectorErrorForm(const Eigen::Ref<const Eigen::MatrixXd>& l,
                                     const TransformedPlant& tp,
                                     const AttackScenario& sc);

// Attack signal recovered from the residual and the error.
Eigen::VectorXd RecoverAttack(const AttackScenario& sc,
                              const Eigen::Ref<const Eigen::MatrixXd>& h,
                              const Eigen::Ref<const Eigen::VectorXd>& r,
                              const Eigen::Ref<const Eigen::VectorXd>& ebar1,
                              const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace pec
