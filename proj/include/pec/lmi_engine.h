#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pec/matrix_toolkit.h"

namespace pec {

enum class SlotKind {
  kSymmetric,  // n x n symmetric matrix variable
  kScalar,     // real scalar
  kMatrix,     // rows x cols unstructured matrix
};

struct Slot {
  std::string name;
  SlotKind kind{SlotKind::kScalar};
  int rows{1};
  int cols{1};
  // Symmetric: X > 0 is imposed. Scalar: x >= 0 is imposed.
  bool sign_constrained{false};
};

// One term of a block matrix inequality.
//   Symmetric/matrix slots contribute L X R at block (bi, bj) and its
//   transpose at (bj, bi); on a diagonal block that is L X R + (L X R)'.
//   Scalar slots contribute x M at (bi, bj), mirrored off the diagonal and
//   added once (symmetrized) on it.
struct LmiTerm {
  int bi{0};
  int bj{0};
  int slot{-1};  // -1 for a constant term stored in L
  bool scalar{false};
  Eigen::MatrixXd L;
  Eigen::MatrixXd R;
};

// Block-partitioned constraint sum(terms) >= 0.
class BlockLmi {
 public:
  BlockLmi() = default;
  BlockLmi(std::string name, std::vector<int> block_dims);

  const std::string& name() const { return name_; }
  const std::vector<int>& block_dims() const { return dims_; }
  int dim() const { return total_; }
  int offset(int block) const { return offsets_.at(block); }
  const std::vector<LmiTerm>& terms() const { return terms_; }

  void AddConstant(int bi, int bj, const Eigen::Ref<const Eigen::MatrixXd>& m);
  void AddTerm(int bi, int bj, const Eigen::Ref<const Eigen::MatrixXd>& l,
               int slot, const Eigen::Ref<const Eigen::MatrixXd>& r);
  void AddScalarTerm(int bi, int bj, const Eigen::Ref<const Eigen::MatrixXd>& m,
                     int slot);

 private:
  void CheckBlock(int bi, int bj, Eigen::Index rows, Eigen::Index cols) const;

  std::string name_;
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_{0};
  std::vector<LmiTerm> terms_;
};

// Slots, constraints, and an objective of the form
//   sum_k trace_weight_k trace(X_k) - sum_k logdet_weight_k log det(X_k).
class LmiProgram {
 public:
  int AddSymmetric(const std::string& name, int n, bool positive_definite);
  int AddScalar(const std::string& name, bool nonnegative);
  int AddMatrix(const std::string& name, int rows, int cols);

  BlockLmi& AddConstraint(const std::string& name, std::vector<int> dims);

  void MinimizeTrace(int slot, double weight = 1.0);
  void MinimizeNegLogDet(int slot, double weight = 1.0);

  const std::vector<Slot>& slots() const { return slots_; }
  const std::vector<BlockLmi>& constraints() const { return constraints_; }
  const std::vector<std::pair<int, double>>& trace_terms() const {
    return trace_;
  }
  const std::vector<std::pair<int, double>>& logdet_terms() const {
    return logdet_;
  }
  int SlotIndex(const std::string& name) const;

 private:
  std::vector<Slot> slots_;
  std::vector<BlockLmi> constraints_;
  std::vector<std::pair<int, double>> trace_;
  std::vector<std::pair<int, double>> logdet_;
};

// Values for every slot, indexed like LmiProgram::slots(); scalars are 1x1.
using Assignment = std::vector<Eigen::MatrixXd>;

Assignment ZeroAssignment(const LmiProgram& program);

// Evaluates a constraint directly from its terms.
SymMat Assemble(const BlockLmi& lmi, const Assignment& values);

// Objective value at an assignment (inf if a log-det slot is not PD).
double EvaluateObjective(const LmiProgram& program, const Assignment& values);

enum class SolveStatus { kOptimal, kInfeasible, kNumericalTrouble };

const char* StatusName(SolveStatus status);

struct SolverOptions {
  double feas_tol{1e-7};
  // Relative duality-gap target of the barrier method.
  double gap_tol{1e-9};
  double mu{8.0};
  int max_newton{6000};
  // Box |x_i| <= phase1_box on the coordinates during phase I.
  double phase1_box{1e10};
};

struct SdpSolution {
  SolveStatus status{SolveStatus::kNumericalTrouble};
  Assignment values;
  double objective{0.0};
  // Minimum eigenvalue of each constraint, then of each sign-constrained
  // slot, from the independent assembler.
  std::vector<double> certificate;
  double min_certificate{0.0};
  int newton_steps{0};
  std::string message;

  bool ok() const { return status == SolveStatus::kOptimal; }
  const Eigen::MatrixXd& value(int slot) const { return values.at(slot); }
  double scalar(int slot) const { return values.at(slot)(0, 0); }
};

SdpSolution Solve(const LmiProgram& program, const SolverOptions& opts = {});

// Recomputes the certificate of `values` from scratch.
std::vector<double> VerifyCertificate(const LmiProgram& program,
                                      const Assignment& values);

enum class Execution { kSerial, kParallel };

struct GridOutcome {
  int best_index{-1};
  std::vector<double> best_point;
  SdpSolution best;
  // Status and objective at every grid point, in grid order.
  std::vector<SolveStatus> statuses;
  std::vector<double> objectives;
};

using ProgramBuilder =
    std::function<LmiProgram(const std::vector<double>& point)>;

// Solves one program per grid point and keeps the feasible solution with the
// smallest objective; ties go to the earliest point. Parallel and serial
// execution produce identical results. Throws AllInfeasible.
GridOutcome GridSearch(const ProgramBuilder& build,
                       const std::vector<std::vector<double>>& grid,
                       const SolverOptions& opts,
                       Execution exec = Execution::kParallel, int jobs = 0);

std::vector<double> LogSpace(double lo, double hi, int n);
std::vector<double> LinSpace(double lo, double hi, int n);

// Cartesian product in row-major order (first axis slowest).
std::vector<std::vector<double>> GridProduct(
    const std::vector<std::vector<double>>& axes);

}  // namespace pec
