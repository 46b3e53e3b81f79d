#include "pec/pipeline.h"

#include <chrono>
#include <iomanip>
#include <sstream>

#include <omp.h>

namespace pec {

std::vector<double> EffectiveAlphaGrid(const ModelFile& m,
                                       const RunOptions& o) {
  if (!o.alpha_grid.empty()) return o.alpha_grid;
  if (!m.alpha_grid.empty()) return m.alpha_grid;
  return DefaultAlphaGrid();
}

std::vector<double> EffectiveAlphaRGrid(const ModelFile& m,
                                        const RunOptions& o) {
  if (!o.alpha_r_grid.empty()) return o.alpha_r_grid;
  if (!m.alpha_r_grid.empty()) return m.alpha_r_grid;
  return DefaultAlphaRGrid();
}

ResidualSetResult RunResidualSet(const ModelFile& m, const RunOptions& o) {
  return ResidualSetSearch(m.plant, m.bounds, m.L, EffectiveAlphaGrid(m, o),
                           EffectiveAlphaRGrid(m, o), o.solver,
                           Execution::kParallel, o.jobs);
}

EllipsoidCertificate RunErrorSet(const ModelFile& m, const SymMat& pi,
                                 const AttackScenario& sc, const RunOptions& o,
                                 Execution exec) {
  const TransformedPlant tp = TransformPlant(m.plant);
  const ResidualDrivenLoop rd = DetectorErrorForm(m.L, tp, sc);
  return DetectorErrorSetSearch(rd, m.bounds, pi, sc, EffectiveAlphaGrid(m, o),
                                o.solver, exec, o.jobs);
}

ScenarioOutcome RunScenario(const ModelFile& m, const SymMat& pi,
                            const std::vector<int>& sensors,
                            const RunOptions& o, Execution exec) {
  const auto t0 = std::chrono::steady_clock::now();
  const AttackScenario sc = MakeScenario(m.plant.ny(), sensors);
  const TransformedPlant tp = TransformPlant(m.plant);
  const Detector det = MakeDetector(m.plant, m.L, pi);
  ScenarioOutcome out;
  out.error_set = RunErrorSet(m, pi, sc, o, exec);
  const SynthesisInputs in{&m.base, &tp, &m.bounds, &det, &out.error_set, &sc};
  out.synthesis = Synthesize(in, EffectiveAlphaGrid(m, o), o.solver, exec,
                             o.jobs);
  out.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return out;
}

std::vector<ScenarioOutcome> RunTable(const ModelFile& m, const SymMat& pi,
                                      const RunOptions& o) {
  const int n = static_cast<int>(m.scenarios.size());
  std::vector<ScenarioOutcome> rows(n);
  if (o.jobs > 1) {
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(o.jobs)
    for (int i = 0; i < n; ++i) {
      try {
        rows[i] = RunScenario(m, pi, m.scenarios[i], o, Execution::kSerial);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      rows[i] = RunScenario(m, pi, m.scenarios[i], o, Execution::kParallel);
    }
  }
  return rows;
}

std::string TableCsv(const std::vector<ScenarioOutcome>& rows) {
  std::ostringstream os;
  os << "sensors,logdet_Pe_bar,trace_base,trace_opt";
  int fr = 0, fc = 0;
  if (!rows.empty()) {
    fr = static_cast<int>(rows[0].synthesis.F_star.rows());
    fc = static_cast<int>(rows[0].synthesis.F_star.cols());
  }
  for (int i = 0; i < fr; ++i) {
    for (int j = 0; j < fc; ++j) os << ",F" << i + 1 << j + 1;
  }
  os << "\n" << std::setprecision(17);
  for (const ScenarioOutcome& r : rows) {
    os << '"' << SensorLabel(r.synthesis.sensors) << '"' << ',' << r.error_set.objective << ','
       << r.synthesis.trace_base << ',' << r.synthesis.trace_opt;
    const Eigen::MatrixXd& f = r.synthesis.F_star;
    for (int i = 0; i < fr; ++i) {
      for (int j = 0; j < fc; ++j) os << ',' << f(i, j);
    }
    os << "\n";
  }
  return os.str();
}

bool CertificatesHold(const ScenarioOutcome& s, double tol) {
  return s.error_set.min_certificate >= -tol &&
         s.synthesis.min_certificate >= -tol &&
         s.synthesis.min_certificate_base >= -tol;
}

}  // namespace pec
