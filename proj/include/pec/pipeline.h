#pragma once

#include <string>
#include <vector>

#include "pec/io.h"
#include "pec/lmi_engine.h"
#include "pec/set_analysis.h"
#include "pec/synthesis.h"

namespace pec {

struct RunOptions {
  SolverOptions solver;
  // Empty grids fall back to the model file, then to the library defaults.
  std::vector<double> alpha_grid;
  std::vector<double> alpha_r_grid;
  // 0 = all threads. With jobs > 1 the scenario loop of RunTable is the
  // parallel level and every grid below it runs serially.
  int jobs{0};
};

std::vector<double> EffectiveAlphaGrid(const ModelFile& m, const RunOptions& o);
std::vector<double> EffectiveAlphaRGrid(const ModelFile& m,
                                        const RunOptions& o);

ResidualSetResult RunResidualSet(const ModelFile& m, const RunOptions& o);

EllipsoidCertificate RunErrorSet(const ModelFile& m, const SymMat& pi,
                                 const AttackScenario& sc, const RunOptions& o,
                                 Execution exec = Execution::kParallel);

struct ScenarioOutcome {
  EllipsoidCertificate error_set;
  SynthesisResult synthesis;
  double seconds{0.0};
};

ScenarioOutcome RunScenario(const ModelFile& m, const SymMat& pi,
                            const std::vector<int>& sensors,
                            const RunOptions& o,
                            Execution exec = Execution::kParallel);

// One outcome per model scenario, in model order regardless of scheduling.
std::vector<ScenarioOutcome> RunTable(const ModelFile& m, const SymMat& pi,
                                      const RunOptions& o);

// sensors, logdet_Pe_bar, trace_base, trace_opt, F_ij...; 17 significant
// digits. logdet_Pe_bar holds -log det of the error ellipsoid.
std::string TableCsv(const std::vector<ScenarioOutcome>& rows);

// True when every certificate in the outcome is at least -tol.
bool CertificatesHold(const ScenarioOutcome& s, double tol = 1e-6);

}  // namespace pec
