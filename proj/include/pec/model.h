#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pec/matrix_toolkit.h"

namespace pec {

// x' = A x + B u + G w,  y = C x + H v.
struct LtiPlant {
  Eigen::MatrixXd A, B, C, G, H;

  int nx() const { return static_cast<int>(A.rows()); }
  int nu() const { return static_cast<int>(B.cols()); }
  int ny() const { return static_cast<int>(C.rows()); }
  int nw() const { return static_cast<int>(G.cols()); }
  int nv() const { return static_cast<int>(H.cols()); }
};

// Checks dimensions, finiteness, full row rank of C, stabilizability and
// detectability.
LtiPlant MakePlant(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c,
                   Eigen::MatrixXd g, Eigen::MatrixXd h);

// Ellipsoidal bounds w' W_w w <= 1 and v' W_v v <= 1.
struct DisturbanceBounds {
  SymMat W_w;
  SymMat W_v;
};

DisturbanceBounds MakeBounds(const SymMat& w_w, const SymMat& w_v);

enum class PeakRule {
  // W = I / (n peak^2): ball circumscribing the box |x_i| <= peak.
  kCircumscribedBall,
  // W = I / peak^2: the peak bounds the Euclidean norm of the vector.
  kNormBound,
};

DisturbanceBounds BoundsFromPeaks(double w_peak, double v_peak, int n_w,
                                  int n_v,
                                  PeakRule rule = PeakRule::kCircumscribedBall);

struct AttackScenario {
  std::vector<int> sensors;  // 1-based, ascending
  Eigen::MatrixXd Gamma;     // ny x s
  Eigen::MatrixXd Gamma_pinv;

  int size() const { return static_cast<int>(sensors.size()); }
  // Gamma * Gamma_pinv, the projector onto the attacked channels.
  Eigen::MatrixXd Projector() const { return Gamma * Gamma_pinv; }
};

// `sensors` may be unsorted; duplicates and out-of-range entries throw
// BadIndex.
AttackScenario MakeScenario(int ny, std::vector<int> sensors);

struct Detector {
  Eigen::MatrixXd L;
  SymMat Pi;
};

Detector MakeDetector(const LtiPlant& plant, Eigen::MatrixXd l, SymMat pi);

// rho' = A_c rho + B_c y,  u = C_c rho + D_c y.
struct BaseController {
  Eigen::MatrixXd Ac, Bc, Cc, Dc;

  int nrho() const { return static_cast<int>(Ac.rows()); }
};

BaseController MakeController(const LtiPlant& plant, Eigen::MatrixXd ac,
                              Eigen::MatrixXd bc, Eigen::MatrixXd cc,
                              Eigen::MatrixXd dc);

// Formats a sensor set as "{1,4}".
std::string SensorLabel(const std::vector<int>& sensors);

}  // namespace pec
