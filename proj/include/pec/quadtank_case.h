#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "pec/model.h"

namespace pec {

// Linearized quadruple-tank process with a decentralized PI controller.
struct QuadTankParams {
  std::array<double, 4> area{28.0, 32.0, 28.0, 32.0};       // cm^2
  std::array<double, 4> outlet{0.071, 0.057, 0.071, 0.057};  // cm^2
  std::array<double, 4> h0{12.4, 12.7, 1.8, 1.4};            // cm
  std::array<double, 2> v0{3.0, 3.0};                        // V
  std::array<double, 2> k{3.33, 3.35};                       // cm^3/(V s)
  std::array<double, 2> gamma{0.70, 0.60};
  double kc{0.5};    // V/cm
  double g{981.0};   // cm/s^2
  double v_peak{0.05};
  double w_peak{0.003};
  std::array<double, 2> pi_gain{3.0, 2.7};
  std::array<double, 2> pi_reset{30.0, 40.0};  // s
  std::vector<double> observer_poles{-2.0, -2.0, -2.1, -2.1};
  PeakRule peak_rule{PeakRule::kNormBound};
};

struct QuadTankCase {
  QuadTankParams params;
  std::array<double, 4> time_constants{};
  LtiPlant plant;
  BaseController base;
  Eigen::MatrixXd L;
  DisturbanceBounds bounds;
  std::vector<AttackScenario> scenarios;
};

// Throws NonPositivePeak / DimensionMismatch on invalid parameters.
QuadTankCase BuildCase(const QuadTankParams& params = {});

// Sensor sets {1}, {4}, {1,4}, {2,4}, {1,2,3,4}.
std::vector<std::vector<int>> CaseScenarioSensors();

}  // namespace pec
