#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pec/lmi_engine.h"
#include "pec/model.h"
#include "pec/pec_realization.h"
#include "pec/set_analysis.h"

namespace pec {

struct SynthesisInputs {
  const BaseController* base{nullptr};
  const TransformedPlant* tp{nullptr};
  const DisturbanceBounds* bounds{nullptr};
  const Detector* detector{nullptr};        // L and Pi
  const EllipsoidCertificate* error_set{nullptr};  // detector error set
  const AttackScenario* scenario{nullptr};
};

struct SynthesisResult {
  std::vector<int> sensors;
  Eigen::MatrixXd F_star;
  Eigen::MatrixXd Theta;
  SymMat Y;
  SymMat P;  // Y^-1
  double trace_opt{0.0};
  double alpha{0.0};
  std::map<std::string, double> beta;
  double min_certificate{0.0};
  double trace_base{0.0};
  double alpha_base{0.0};
  SymMat Y_base;
  double min_certificate_base{0.0};
  PecRealization realization;
};

// Closed-loop invariance program in Y = P^-1. With optimize_f false the
// realization is frozen at F = 0 (base controller).
LmiProgram SynthesisProgram(const SynthesisInputs& in, double alpha,
                            bool optimize_f);

// Minimizes trace(Y) over a shared alpha grid for both the base controller
// and the optimized realization. Throws CertificateMismatch when the error
// set was computed for another scenario, AllInfeasible when no alpha works.
SynthesisResult Synthesize(const SynthesisInputs& in,
                           const std::vector<double>& alpha_grid,
                           const SolverOptions& opts = {},
                           Execution exec = Execution::kParallel,
                           int jobs = 0);

// Trace of the base-controller (F = 0) ellipsoid over the grid.
double BaselineTrace(const SynthesisInputs& in,
                     const std::vector<double>& alpha_grid,
                     const SolverOptions& opts = {},
                     Execution exec = Execution::kParallel, int jobs = 0);

}  // namespace pec
