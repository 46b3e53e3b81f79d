#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "pec/pipeline.h"
#include "pec/quadtank_case.h"

namespace pec {
namespace testing {

// Case-study artifacts shared by the heavier tests in one binary. The alpha
// grids are coarse: any certified ellipsoid is a valid test subject.
struct CaseArtifacts {
  QuadTankCase qc;
  ModelFile model;
  TransformedPlant tp;
  ResidualSetResult residual;
  std::map<std::vector<int>, ScenarioOutcome> scenarios;
};

inline RunOptions CoarseOptions() {
  RunOptions o;
  o.alpha_grid = LogSpace(1e-2, 1e1, 8);
  o.alpha_r_grid = {0.3, 0.5, 0.7};
  return o;
}

inline CaseArtifacts& Artifacts() {
  static std::once_flag once;
  static std::unique_ptr<CaseArtifacts> a;
  std::call_once(once, [] {
    a = std::make_unique<CaseArtifacts>();
    a->qc = BuildCase();
    a->model = ModelFromCase(a->qc);
    a->tp = TransformPlant(a->qc.plant);
    a->residual = RunResidualSet(a->model, CoarseOptions());
  });
  return *a;
}

inline const ScenarioOutcome& Scenario(const std::vector<int>& sensors) {
  static std::mutex mu;
  CaseArtifacts& a = Artifacts();
  std::lock_guard<std::mutex> lock(mu);
  auto it = a.scenarios.find(sensors);
  if (it == a.scenarios.end()) {
    it = a.scenarios
             .emplace(sensors, RunScenario(a.model, a.residual.Pi, sensors,
                                           CoarseOptions()))
             .first;
  }
  return it->second;
}

}  // namespace testing
}  // namespace pec
