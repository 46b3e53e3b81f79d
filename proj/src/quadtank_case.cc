#include "pec/quadtank_case.h"

#include <cmath>

namespace pec {

std::vector<std::vector<int>> CaseScenarioSensors() {
  return {{1}, {4}, {1, 4}, {2, 4}, {1, 2, 3, 4}};
}

QuadTankCase BuildCase(const QuadTankParams& p) {
  for (int i = 0; i < 4; ++i) {
    if (!(p.area[i] > 0.0) || !(p.outlet[i] > 0.0) || !(p.h0[i] > 0.0)) {
      throw PecError(ErrorCode::kDimensionMismatch,
                     "tank areas and levels must be positive");
    }
  }
  for (int j = 0; j < 2; ++j) {
    if (!(p.k[j] > 0.0) || !(p.gamma[j] > 0.0 && p.gamma[j] < 1.0) ||
        !(p.pi_gain[j] > 0.0) || !(p.pi_reset[j] > 0.0)) {
      throw PecError(ErrorCode::kDimensionMismatch,
                     "pump, valve, and PI parameters out of range");
    }
  }
  if (!(p.kc > 0.0) || !(p.g > 0.0)) {
    throw PecError(ErrorCode::kDimensionMismatch, "k_c and g must be > 0");
  }

  QuadTankCase qc;
  qc.params = p;
  auto& t = qc.time_constants;
  for (int i = 0; i < 4; ++i) {
    t[i] = p.area[i] / p.outlet[i] * std::sqrt(2.0 * p.h0[i] / p.g);
  }
  const auto& A = p.area;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) a(i, i) = -1.0 / t[i];
  a(0, 2) = A[2] / (A[0] * t[2]);
  a(1, 3) = A[3] / (A[1] * t[3]);

  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(4, 2);
  b(0, 0) = p.gamma[0] * p.k[0] * p.kc / A[0];
  b(1, 1) = p.gamma[1] * p.k[1] * p.kc / A[1];
  b(2, 1) = (1.0 - p.gamma[1]) * p.k[1] * p.kc / A[2];
  b(3, 0) = (1.0 - p.gamma[0]) * p.k[0] * p.kc / A[3];

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
  qc.plant = MakePlant(a, b, eye, b, eye);

  // PI on y1, y2; regulation about the operating point (no reference).
  Eigen::MatrixXd ac = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd bc = Eigen::MatrixXd::Zero(2, 4);
  bc(0, 0) = -1.0;
  bc(1, 1) = -1.0;
  Eigen::MatrixXd cc = Eigen::MatrixXd::Zero(2, 2);
  cc(0, 0) = p.pi_gain[0] / p.pi_reset[0];
  cc(1, 1) = p.pi_gain[1] / p.pi_reset[1];
  Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(2, 4);
  dc(0, 0) = -p.pi_gain[0];
  dc(1, 1) = -p.pi_gain[1];
  qc.base = MakeController(qc.plant, ac, bc, cc, dc);

  qc.L = PlaceObserverGain(qc.plant.A, qc.plant.C, p.observer_poles);
  qc.bounds = BoundsFromPeaks(p.w_peak, p.v_peak, qc.plant.nw(),
                              qc.plant.nv(), p.peak_rule);
  for (const auto& s : CaseScenarioSensors()) {
    qc.scenarios.push_back(MakeScenario(4, s));
  }
  return qc;
}

}  // namespace pec
