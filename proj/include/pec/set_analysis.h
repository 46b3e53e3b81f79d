#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pec/lmi_engine.h"
#include "pec/model.h"
#include "pec/pec_realization.h"

namespace pec {

enum class ProgramId { kResidualSet, kDetectorErrorSet, kClosedLoopSet };

const char* ProgramName(ProgramId id);

// {z : z' P z <= 1}, certified forward invariant by an S-procedure LMI.
struct EllipsoidCertificate {
  ProgramId program{ProgramId::kResidualSet};
  SymMat P;
  double alpha{0.0};
  std::map<std::string, double> beta;
  double objective{0.0};
  double min_certificate{0.0};
  std::vector<int> sensors;  // attack scenario, empty when attack free
};

// Attack-free residual set. The error ellipsoid P_e and the residual
// ellipsoid Pi are found jointly for fixed (alpha_e, alpha_r).
struct ResidualSetResult {
  EllipsoidCertificate Pe;
  SymMat Pi;
  double alpha_e{0.0};
  double alpha_r{0.0};
  double neg_logdet_pe{0.0};
  double neg_logdet_pi{0.0};
  double objective{0.0};
};

LmiProgram ResidualSetProgram(const LtiPlant& plant,
                              const DisturbanceBounds& bounds,
                              const Eigen::Ref<const Eigen::MatrixXd>& l,
                              double alpha_e, double alpha_r);

ResidualSetResult ResidualSet(const LtiPlant& plant,
                              const DisturbanceBounds& bounds,
                              const Eigen::Ref<const Eigen::MatrixXd>& l,
                              double alpha_e, double alpha_r,
                              const SolverOptions& opts = {});

// Grid over (alpha_e, alpha_r). Throws AllInfeasible.
ResidualSetResult ResidualSetSearch(const LtiPlant& plant,
                                    const DisturbanceBounds& bounds,
                                    const Eigen::Ref<const Eigen::MatrixXd>& l,
                                    const std::vector<double>& alpha_e_grid,
                                    const std::vector<double>& alpha_r_grid,
                                    const SolverOptions& opts = {},
                                    Execution exec = Execution::kParallel,
                                    int jobs = 0);

// Default residual grids: 30 log-spaced alpha_e in [1e-2, 1e1] and 19
// alpha_r in [0.05, 0.95].
std::vector<double> DefaultAlphaGrid();
std::vector<double> DefaultAlphaRGrid();

// Detector error ellipsoid under a stealthy attack on the scenario's sensors.
LmiProgram DetectorErrorProgram(const ResidualDrivenLoop& rd,
                                const DisturbanceBounds& bounds,
                                const SymMat& pi, double alpha);

EllipsoidCertificate DetectorErrorSet(const ResidualDrivenLoop& rd,
                                      const DisturbanceBounds& bounds,
                                      const SymMat& pi, double alpha,
                                      const AttackScenario& sc,
                                      const SolverOptions& opts = {});

EllipsoidCertificate DetectorErrorSetSearch(
    const ResidualDrivenLoop& rd, const DisturbanceBounds& bounds,
    const SymMat& pi, const AttackScenario& sc,
    const std::vector<double>& alpha_grid, const SolverOptions& opts = {},
    Execution exec = Execution::kParallel, int jobs = 0);

}  // namespace pec
