#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pec/error.h"

namespace pec {

// Symmetric matrix. Construction rejects non-finite or visibly asymmetric
// input and stores the symmetrized value.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(const Eigen::Ref<const Eigen::MatrixXd>& m);

  static SymMat Identity(int n);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

// Throws NonFinite if any entry is NaN or Inf.
void CheckFinite(const Eigen::Ref<const Eigen::MatrixXd>& m, const char* what);

// Default numerical rank tolerance: 1e-9 times the largest singular value.
double DefaultRankTol(const Eigen::Ref<const Eigen::MatrixXd>& m);

int Rank(const Eigen::Ref<const Eigen::MatrixXd>& m);
int Rank(const Eigen::Ref<const Eigen::MatrixXd>& m, double tol);

// Orthonormal basis K of {z : z' M = 0}. Singular values at or below `tol`
// count as zero. Returns a rows(M) x 0 matrix when the space is trivial.
Eigen::MatrixXd LeftNullBasis(const Eigen::Ref<const Eigen::MatrixXd>& m,
                              double tol = 1e-9);

// Orthonormal basis of {z : M z = 0}, one column per null direction.
Eigen::MatrixXd NullBasis(const Eigen::Ref<const Eigen::MatrixXd>& m,
                          double tol = 1e-9);

Eigen::MatrixXd PseudoInverse(const Eigen::Ref<const Eigen::MatrixXd>& m);

// True iff every eigenvalue has real part < -margin. A round-off allowance of
// 1e-9 * max(1, |M|) is added to the margin so that eigenvalues lying on the
// imaginary axis are never reported stable because of rounding.
bool IsHurwitz(const Eigen::Ref<const Eigen::MatrixXd>& m, double margin = 0.0);

// Largest real part over the spectrum.
double SpectralAbscissa(const Eigen::Ref<const Eigen::MatrixXd>& m);

// Largest eigenvalue magnitude.
double SpectralRadius(const Eigen::Ref<const Eigen::MatrixXd>& m);

Eigen::MatrixXd ObservabilityMatrix(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                    const Eigen::Ref<const Eigen::MatrixXd>& c);
bool IsObservable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                  const Eigen::Ref<const Eigen::MatrixXd>& c);

// PBH tests over the closed right half plane.
bool IsStabilizable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                    const Eigen::Ref<const Eigen::MatrixXd>& b);
bool IsDetectable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                  const Eigen::Ref<const Eigen::MatrixXd>& c);

// Gain L with eig(A - L C) equal to `poles` (real, negative). Square
// invertible C is solved directly; otherwise the dual problem is solved by
// a Sylvester-equation eigenstructure method, staged through intermediate
// poles when the targets collide with the open-loop spectrum.
Eigen::MatrixXd PlaceObserverGain(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                  const Eigen::Ref<const Eigen::MatrixXd>& c,
                                  const std::vector<double>& poles);

double MinEigSym(const SymMat& m);
double MinEigSym(const Eigen::Ref<const Eigen::MatrixXd>& m);

// log det of a symmetric positive definite matrix (NotPositiveDefinite
// otherwise).
double LogDetSpd(const Eigen::Ref<const Eigen::MatrixXd>& m);

// Real coefficients c[0..n] (c[n] = 1) of prod (s - p_i).
std::vector<double> PolyFromRoots(const std::vector<double>& roots);

}  // namespace pec
