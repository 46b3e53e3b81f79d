#include "pec/matrix_toolkit.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>

namespace pec {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kNotObservable: return "NotObservable";
    case ErrorCode::kNotStabilizable: return "NotStabilizable";
    case ErrorCode::kNotDetectable: return "NotDetectable";
    case ErrorCode::kBadIndex: return "BadIndex";
    case ErrorCode::kNonPositivePeak: return "NonPositivePeak";
    case ErrorCode::kRankDeficientC: return "RankDeficientC";
    case ErrorCode::kKernelViolation: return "KernelViolation";
    case ErrorCode::kNotStable: return "NotStable";
    case ErrorCode::kDetectorUnstable: return "DetectorUnstable";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kNumericalTrouble: return "NumericalTrouble";
    case ErrorCode::kAllInfeasible: return "AllInfeasible";
    case ErrorCode::kCertificateMismatch: return "CertificateMismatch";
    case ErrorCode::kStepTooLarge: return "StepTooLarge";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

void CheckFinite(const Eigen::Ref<const Eigen::MatrixXd>& m, const char* what) {
  if (!m.allFinite()) {
    throw PecError(ErrorCode::kNonFinite,
                   std::string(what) + " has non-finite entries");
  }
}

SymMat::SymMat(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.rows() != m.cols()) {
    throw PecError(ErrorCode::kDimensionMismatch, "SymMat must be square");
  }
  CheckFinite(m, "SymMat");
  const double scale = m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
  const double asym =
      m.size() > 0 ? (m - m.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (asym > 1e-10 * (1.0 + scale)) {
    throw PecError(ErrorCode::kNotSymmetric,
                   "asymmetry " + std::to_string(asym));
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMat SymMat::Identity(int n) {
  return SymMat(Eigen::MatrixXd::Identity(n, n));
}

double DefaultRankTol(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return 1e-9 * svd.singularValues()(0);
}

int Rank(const Eigen::Ref<const Eigen::MatrixXd>& m, double tol) {
  CheckFinite(m, "Rank input");
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++r;
  }
  return r;
}

int Rank(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  return Rank(m, DefaultRankTol(m));
}

Eigen::MatrixXd LeftNullBasis(const Eigen::Ref<const Eigen::MatrixXd>& m,
                              double tol) {
  CheckFinite(m, "LeftNullBasis input");
  const int rows = static_cast<int>(m.rows());
  if (m.cols() == 0) return Eigen::MatrixXd::Identity(rows, rows);
  // Left null space of M = null space of M'. Full U gives all of R^rows.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++r;
  }
  return svd.matrixU().rightCols(rows - r);
}

Eigen::MatrixXd NullBasis(const Eigen::Ref<const Eigen::MatrixXd>& m,
                          double tol) {
  Eigen::MatrixXd mt = m.transpose();
  return LeftNullBasis(mt, tol);
}

Eigen::MatrixXd PseudoInverse(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  CheckFinite(m, "PseudoInverse input");
  if (m.size() == 0) return Eigen::MatrixXd::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double tol =
      std::numeric_limits<double>::epsilon() *
      static_cast<double>(std::max(m.rows(), m.cols())) * s(0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > tol) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

namespace {

Eigen::VectorXcd Eigenvalues(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.rows() != m.cols()) {
    throw PecError(ErrorCode::kDimensionMismatch, "eigenvalues need square");
  }
  CheckFinite(m, "eigenvalue input");
  if (m.rows() == 0) return Eigen::VectorXcd(0);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) {
    throw PecError(ErrorCode::kNumericalTrouble, "eigensolver failed");
  }
  return es.eigenvalues();
}

}  // namespace

double SpectralAbscissa(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  const Eigen::VectorXcd ev = Eigenvalues(m);
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < ev.size(); ++i) best = std::max(best, ev(i).real());
  return best;
}

double SpectralRadius(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  const Eigen::VectorXcd ev = Eigenvalues(m);
  double best = 0.0;
  for (int i = 0; i < ev.size(); ++i) best = std::max(best, std::abs(ev(i)));
  return best;
}

bool IsHurwitz(const Eigen::Ref<const Eigen::MatrixXd>& m, double margin) {
  if (m.rows() == 0) return true;
  const double slack = 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff());
  return SpectralAbscissa(m) < -margin - slack;
}

Eigen::MatrixXd ObservabilityMatrix(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                    const Eigen::Ref<const Eigen::MatrixXd>& c) {
  const int n = static_cast<int>(a.rows());
  const int p = static_cast<int>(c.rows());
  if (a.cols() != n || c.cols() != n) {
    throw PecError(ErrorCode::kDimensionMismatch, "observability dims");
  }
  Eigen::MatrixXd obs(n * p, n);
  Eigen::MatrixXd block = c;
  for (int k = 0; k < n; ++k) {
    obs.middleRows(k * p, p) = block;
    block = block * a;
  }
  return obs;
}

bool IsObservable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                  const Eigen::Ref<const Eigen::MatrixXd>& c) {
  CheckFinite(a, "A");
  CheckFinite(c, "C");
  const Eigen::MatrixXd obs = ObservabilityMatrix(a, c);
  return Rank(obs) == a.rows() && obs.cwiseAbs().maxCoeff() > 0.0;
}

namespace {

// PBH rank of [lambda I - A, B] for every eigenvalue with Re >= 0.
bool PbhUnstableModes(const Eigen::Ref<const Eigen::MatrixXd>& a,
                      const Eigen::Ref<const Eigen::MatrixXd>& b) {
  const int n = static_cast<int>(a.rows());
  const Eigen::VectorXcd ev = Eigenvalues(a);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i).real() < -1e-9 * scale) continue;
    Eigen::MatrixXcd pbh(n, n + b.cols());
    pbh.leftCols(n) = ev(i) * Eigen::MatrixXcd::Identity(n, n) -
                      a.cast<std::complex<double>>();
    pbh.rightCols(b.cols()) = b.cast<std::complex<double>>();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pbh);
    const auto& s = svd.singularValues();
    int r = 0;
    for (int k = 0; k < s.size(); ++k) {
      if (s(k) > 1e-9 * std::max(s(0), 1e-300)) ++r;
    }
    if (s(0) == 0.0 || r < n) return false;
  }
  return true;
}

}  // namespace

bool IsStabilizable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                    const Eigen::Ref<const Eigen::MatrixXd>& b) {
  if (b.rows() != a.rows()) {
    throw PecError(ErrorCode::kDimensionMismatch, "stabilizability dims");
  }
  return PbhUnstableModes(a, b);
}

bool IsDetectable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                  const Eigen::Ref<const Eigen::MatrixXd>& c) {
  if (c.cols() != a.rows()) {
    throw PecError(ErrorCode::kDimensionMismatch, "detectability dims");
  }
  Eigen::MatrixXd at = a.transpose();
  Eigen::MatrixXd ct = c.transpose();
  return PbhUnstableModes(at, ct);
}

std::vector<double> PolyFromRoots(const std::vector<double>& roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

namespace {

bool SpectrumMatches(const Eigen::MatrixXd& m, std::vector<double> poles,
                     double rel_tol) {
  const Eigen::VectorXcd ev = Eigenvalues(m);
  std::vector<std::complex<double>> got(ev.data(), ev.data() + ev.size());
  std::sort(poles.begin(), poles.end());
  std::sort(got.begin(), got.end(), [](auto x, auto y) {
    return x.real() < y.real();
  });
  for (size_t i = 0; i < poles.size(); ++i) {
    const double tol = rel_tol * std::max(1.0, std::abs(poles[i]));
    if (std::abs(got[i] - poles[i]) > tol) return false;
  }
  return true;
}

// K with eig(A - B K) = poles via A X - X Lambda = B G, K = G X^-1.
// Lambda is the companion matrix of the target polynomial.
Eigen::MatrixXd SylvesterPlace(const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& b,
                               const std::vector<double>& poles) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(b.cols());
  const std::vector<double> coef = PolyFromRoots(poles);
  Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) lambda(i + 1, i) = 1.0;
  for (int i = 0; i < n; ++i) lambda(i, n - 1) = -coef[i];

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd kron(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      kron.block(i * n, j * n, n, n) = -lambda(j, i) * id;
    }
    kron.block(i * n, i * n, n, n) += a;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kron);

  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int attempt = 0; attempt < 32; ++attempt) {
    Eigen::MatrixXd g(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = unif(rng);
    Eigen::MatrixXd rhs = b * g;
    Eigen::VectorXd x = lu.solve(Eigen::Map<Eigen::VectorXd>(rhs.data(),
                                                             n * n));
    Eigen::MatrixXd xm = Eigen::Map<Eigen::MatrixXd>(x.data(), n, n);
    Eigen::FullPivLU<Eigen::MatrixXd> xlu(xm);
    if (!xlu.isInvertible()) continue;
    Eigen::MatrixXd k = g * xlu.inverse();
    if (k.allFinite() && SpectrumMatches(a - b * k, poles, 1e-6)) return k;
  }
  throw PecError(ErrorCode::kNumericalTrouble, "pole placement did not converge");
}

}  // namespace

Eigen::MatrixXd PlaceObserverGain(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                  const Eigen::Ref<const Eigen::MatrixXd>& c,
                                  const std::vector<double>& poles) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || c.cols() != n ||
      static_cast<int>(poles.size()) != n) {
    throw PecError(ErrorCode::kDimensionMismatch, "PlaceObserverGain dims");
  }
  CheckFinite(a, "A");
  CheckFinite(c, "C");
  if (!IsObservable(a, c)) {
    throw PecError(ErrorCode::kNotObservable, "(A, C) not observable");
  }

  if (c.rows() == n) {
    // A - L C = diag(poles) directly.
    Eigen::MatrixXd target = a;
    for (int i = 0; i < n; ++i) target(i, i) -= poles[i];
    return target * c.inverse();
  }

  const Eigen::MatrixXd at = a.transpose();
  const Eigen::MatrixXd ct = c.transpose();
  const Eigen::VectorXcd ev = Eigenvalues(a);
  double radius = 0.0;
  bool collide = false;
  for (int i = 0; i < ev.size(); ++i) {
    radius = std::max(radius, std::abs(ev(i)));
    for (double p : poles) {
      if (std::abs(ev(i) - p) < 1e-6 * std::max(1.0, std::abs(p))) {
        collide = true;
      }
    }
  }
  if (!collide) return SylvesterPlace(at, ct, poles).transpose();

  // Stage through poles well left of both spectra.
  double shift = 1.0 + 2.0 * radius;
  for (double p : poles) shift = std::max(shift, 1.0 + 2.0 * std::abs(p));
  std::vector<double> staged;
  for (int i = 0; i < n; ++i) staged.push_back(-shift - 0.5 * i);
  const Eigen::MatrixXd k1 = SylvesterPlace(at, ct, staged);
  const Eigen::MatrixXd a1 = at - ct * k1;
  const Eigen::MatrixXd k2 = SylvesterPlace(a1, ct, poles);
  return (k1 + k2).transpose();
}

double MinEigSym(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double MinEigSym(const SymMat& m) { return MinEigSym(m.matrix()); }

double LogDetSpd(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (m + m.transpose()));
  if (llt.info() != Eigen::Success) {
    throw PecError(ErrorCode::kNotPositiveDefinite, "log det of non-PD matrix");
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace pec
