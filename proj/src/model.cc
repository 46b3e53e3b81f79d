#include "pec/model.h"

#include <algorithm>
#include <set>
#include <string>

namespace pec {

namespace {

void RequireDims(bool ok, const std::string& what) {
  if (!ok) throw PecError(ErrorCode::kDimensionMismatch, what);
}

}  // namespace

LtiPlant MakePlant(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c,
                   Eigen::MatrixXd g, Eigen::MatrixXd h) {
  const auto n = a.rows();
  RequireDims(a.cols() == n && n > 0, "A must be square and nonempty");
  RequireDims(b.rows() == n, "B rows");
  RequireDims(c.cols() == n, "C cols");
  RequireDims(g.rows() == n, "G rows");
  RequireDims(h.rows() == c.rows(), "H rows");
  CheckFinite(a, "A");
  CheckFinite(b, "B");
  CheckFinite(c, "C");
  CheckFinite(g, "G");
  CheckFinite(h, "H");
  if (Rank(c) != c.rows() || c.rows() > n) {
    throw PecError(ErrorCode::kRankDeficientC, "C must have full row rank");
  }
  if (!IsStabilizable(a, b)) {
    throw PecError(ErrorCode::kNotStabilizable, "(A, B) not stabilizable");
  }
  if (!IsDetectable(a, c)) {
    throw PecError(ErrorCode::kNotDetectable, "(A, C) not detectable");
  }
  return LtiPlant{std::move(a), std::move(b), std::move(c), std::move(g),
                  std::move(h)};
}

DisturbanceBounds MakeBounds(const SymMat& w_w, const SymMat& w_v) {
  if (MinEigSym(w_w) <= 0.0 || MinEigSym(w_v) <= 0.0) {
    throw PecError(ErrorCode::kNotPositiveDefinite,
                   "disturbance bound matrices must be positive definite");
  }
  return DisturbanceBounds{w_w, w_v};
}

DisturbanceBounds BoundsFromPeaks(double w_peak, double v_peak, int n_w,
                                  int n_v, PeakRule rule) {
  if (!(w_peak > 0.0) || !(v_peak > 0.0)) {
    throw PecError(ErrorCode::kNonPositivePeak, "peaks must be positive");
  }
  if (n_w <= 0 || n_v <= 0) {
    throw PecError(ErrorCode::kDimensionMismatch, "channel counts");
  }
  const double kw = rule == PeakRule::kCircumscribedBall ? n_w : 1.0;
  const double kv = rule == PeakRule::kCircumscribedBall ? n_v : 1.0;
  return MakeBounds(
      SymMat(Eigen::MatrixXd::Identity(n_w, n_w) / (kw * w_peak * w_peak)),
      SymMat(Eigen::MatrixXd::Identity(n_v, n_v) / (kv * v_peak * v_peak)));
}

AttackScenario MakeScenario(int ny, std::vector<int> sensors) {
  if (sensors.empty()) {
    throw PecError(ErrorCode::kBadIndex, "empty sensor set");
  }
  std::sort(sensors.begin(), sensors.end());
  for (size_t i = 0; i < sensors.size(); ++i) {
    if (sensors[i] < 1 || sensors[i] > ny) {
      throw PecError(ErrorCode::kBadIndex,
                     "sensor " + std::to_string(sensors[i]) + " outside [1, " +
                         std::to_string(ny) + "]");
    }
    if (i > 0 && sensors[i] == sensors[i - 1]) {
      throw PecError(ErrorCode::kBadIndex,
                     "duplicate sensor " + std::to_string(sensors[i]));
    }
  }
  const int s = static_cast<int>(sensors.size());
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(ny, s);
  for (int j = 0; j < s; ++j) gamma(sensors[j] - 1, j) = 1.0;
  // Canonical columns: the pseudoinverse is the transpose exactly.
  Eigen::MatrixXd pinv = gamma.transpose();
  return AttackScenario{std::move(sensors), std::move(gamma), std::move(pinv)};
}

Detector MakeDetector(const LtiPlant& plant, Eigen::MatrixXd l, SymMat pi) {
  RequireDims(l.rows() == plant.nx() && l.cols() == plant.ny(), "L dims");
  RequireDims(pi.dim() == plant.ny(), "Pi dims");
  CheckFinite(l, "L");
  if (!IsHurwitz(plant.A - l * plant.C)) {
    throw PecError(ErrorCode::kNotStable, "A - L C is not Hurwitz");
  }
  if (MinEigSym(pi) <= 0.0) {
    throw PecError(ErrorCode::kNotPositiveDefinite, "Pi must be PD");
  }
  return Detector{std::move(l), std::move(pi)};
}

BaseController MakeController(const LtiPlant& plant, Eigen::MatrixXd ac,
                              Eigen::MatrixXd bc, Eigen::MatrixXd cc,
                              Eigen::MatrixXd dc) {
  const auto nr = ac.rows();
  RequireDims(ac.cols() == nr, "A_c square");
  RequireDims(bc.rows() == nr && bc.cols() == plant.ny(), "B_c dims");
  RequireDims(cc.rows() == plant.nu() && cc.cols() == nr, "C_c dims");
  RequireDims(dc.rows() == plant.nu() && dc.cols() == plant.ny(), "D_c dims");
  CheckFinite(ac, "A_c");
  CheckFinite(bc, "B_c");
  CheckFinite(cc, "C_c");
  CheckFinite(dc, "D_c");
  return BaseController{std::move(ac), std::move(bc), std::move(cc),
                        std::move(dc)};
}

std::string SensorLabel(const std::vector<int>& sensors) {
  std::string out = "{";
  for (size_t i = 0; i < sensors.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(sensors[i]);
  }
  return out + "}";
}

}  // namespace pec
