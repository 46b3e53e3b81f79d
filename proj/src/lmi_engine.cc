#include "pec/lmi_engine.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

#include <omp.h>

namespace pec {

BlockLmi::BlockLmi(std::string name, std::vector<int> block_dims)
    : name_(std::move(name)), dims_(std::move(block_dims)) {
  for (int d : dims_) {
    if (d < 0) throw PecError(ErrorCode::kDimensionMismatch, "negative block");
    offsets_.push_back(total_);
    total_ += d;
  }
}

void BlockLmi::CheckBlock(int bi, int bj, Eigen::Index rows,
                          Eigen::Index cols) const {
  const int nb = static_cast<int>(dims_.size());
  if (bi < 0 || bj < 0 || bi >= nb || bj >= nb) {
    throw PecError(ErrorCode::kDimensionMismatch,
                   name_ + ": block index out of range");
  }
  if (rows != dims_[bi] || cols != dims_[bj]) {
    throw PecError(ErrorCode::kDimensionMismatch,
                   name_ + ": term is " + std::to_string(rows) + "x" +
                       std::to_string(cols) + " at block (" +
                       std::to_string(bi) + "," + std::to_string(bj) + ")");
  }
}

void BlockLmi::AddConstant(int bi, int bj,
                           const Eigen::Ref<const Eigen::MatrixXd>& m) {
  CheckBlock(bi, bj, m.rows(), m.cols());
  CheckFinite(m, "LMI constant");
  terms_.push_back(LmiTerm{bi, bj, -1, false, m, Eigen::MatrixXd()});
}

void BlockLmi::AddTerm(int bi, int bj, const Eigen::Ref<const Eigen::MatrixXd>& l,
                       int slot, const Eigen::Ref<const Eigen::MatrixXd>& r) {
  CheckBlock(bi, bj, l.rows(), r.cols());
  CheckFinite(l, "LMI left factor");
  CheckFinite(r, "LMI right factor");
  if (slot < 0) throw PecError(ErrorCode::kDimensionMismatch, "bad slot");
  terms_.push_back(LmiTerm{bi, bj, slot, false, l, r});
}

void BlockLmi::AddScalarTerm(int bi, int bj,
                             const Eigen::Ref<const Eigen::MatrixXd>& m,
                             int slot) {
  CheckBlock(bi, bj, m.rows(), m.cols());
  CheckFinite(m, "LMI scalar coefficient");
  if (slot < 0) throw PecError(ErrorCode::kDimensionMismatch, "bad slot");
  terms_.push_back(LmiTerm{bi, bj, slot, true, m, Eigen::MatrixXd()});
}

int LmiProgram::AddSymmetric(const std::string& name, int n,
                             bool positive_definite) {
  slots_.push_back(Slot{name, SlotKind::kSymmetric, n, n, positive_definite});
  return static_cast<int>(slots_.size()) - 1;
}

int LmiProgram::AddScalar(const std::string& name, bool nonnegative) {
  slots_.push_back(Slot{name, SlotKind::kScalar, 1, 1, nonnegative});
  return static_cast<int>(slots_.size()) - 1;
}

int LmiProgram::AddMatrix(const std::string& name, int rows, int cols) {
  slots_.push_back(Slot{name, SlotKind::kMatrix, rows, cols, false});
  return static_cast<int>(slots_.size()) - 1;
}

BlockLmi& LmiProgram::AddConstraint(const std::string& name,
                                    std::vector<int> dims) {
  constraints_.emplace_back(name, std::move(dims));
  return constraints_.back();
}

void LmiProgram::MinimizeTrace(int slot, double weight) {
  if (slots_.at(slot).kind != SlotKind::kSymmetric) {
    throw PecError(ErrorCode::kDimensionMismatch, "trace needs symmetric slot");
  }
  trace_.emplace_back(slot, weight);
}

void LmiProgram::MinimizeNegLogDet(int slot, double weight) {
  if (slots_.at(slot).kind != SlotKind::kSymmetric || weight <= 0.0) {
    throw PecError(ErrorCode::kDimensionMismatch,
                   "log det needs a symmetric slot and positive weight");
  }
  logdet_.emplace_back(slot, weight);
}

int LmiProgram::SlotIndex(const std::string& name) const {
  for (size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].name == name) return static_cast<int>(i);
  }
  throw PecError(ErrorCode::kDimensionMismatch, "no slot named " + name);
}

Assignment ZeroAssignment(const LmiProgram& program) {
  Assignment a;
  for (const Slot& s : program.slots()) {
    a.push_back(Eigen::MatrixXd::Zero(s.rows, s.cols));
  }
  return a;
}

namespace {

// Adds one term's contribution; `value` is the slot value (unused for
// constants).
void Accumulate(const BlockLmi& lmi, const LmiTerm& t,
                const Eigen::MatrixXd& value, Eigen::MatrixXd* out) {
  const int ri = lmi.offset(t.bi);
  const int cj = lmi.offset(t.bj);
  const int rows = lmi.block_dims()[t.bi];
  const int cols = lmi.block_dims()[t.bj];
  Eigen::MatrixXd c;
  bool doubled = false;
  if (t.slot < 0) {
    c = t.L;
  } else if (t.scalar) {
    if (value.size() != 1) {
      throw PecError(ErrorCode::kDimensionMismatch,
                     lmi.name() + ": scalar term on a matrix slot");
    }
    c = value(0, 0) * t.L;
  } else {
    if (value.rows() != t.L.cols() || value.cols() != t.R.rows()) {
      throw PecError(ErrorCode::kDimensionMismatch,
                     lmi.name() + ": slot " + std::to_string(t.slot) +
                         " does not fit its factors");
    }
    c = t.L * value * t.R;
    doubled = true;
  }
  if (t.bi == t.bj) {
    if (doubled) {
      out->block(ri, cj, rows, cols) += c + c.transpose();
    } else {
      out->block(ri, cj, rows, cols) += 0.5 * (c + c.transpose());
    }
  } else {
    out->block(ri, cj, rows, cols) += c;
    out->block(cj, ri, cols, rows) += c.transpose();
  }
}

}  // namespace

SymMat Assemble(const BlockLmi& lmi, const Assignment& values) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(lmi.dim(), lmi.dim());
  static const Eigen::MatrixXd kNone;
  for (const LmiTerm& t : lmi.terms()) {
    if (t.slot >= static_cast<int>(values.size())) {
      throw PecError(ErrorCode::kDimensionMismatch, "assignment too short");
    }
    Accumulate(lmi, t, t.slot < 0 ? kNone : values[t.slot], &m);
  }
  return SymMat(m);
}

double EvaluateObjective(const LmiProgram& program, const Assignment& values) {
  double f = 0.0;
  for (auto [slot, w] : program.trace_terms()) f += w * values[slot].trace();
  for (auto [slot, w] : program.logdet_terms()) {
    Eigen::LLT<Eigen::MatrixXd> llt(values[slot]);
    if (llt.info() != Eigen::Success) {
      return std::numeric_limits<double>::infinity();
    }
    f -= w * 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  }
  return f;
}

const char* StatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kNumericalTrouble: return "NumericalTrouble";
  }
  return "Unknown";
}

std::vector<double> VerifyCertificate(const LmiProgram& program,
                                      const Assignment& values) {
  std::vector<double> out;
  for (const BlockLmi& lmi : program.constraints()) {
    out.push_back(MinEigSym(Assemble(lmi, values)));
  }
  const auto& slots = program.slots();
  for (size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].sign_constrained) continue;
    out.push_back(MinEigSym(values[i]));
  }
  return out;
}

namespace {

// Coordinates of the stacked decision vector.
struct Coord {
  int slot;
  int i;
  int j;
};

std::vector<Coord> Coordinates(const LmiProgram& program) {
  std::vector<Coord> coords;
  const auto& slots = program.slots();
  for (int s = 0; s < static_cast<int>(slots.size()); ++s) {
    const Slot& sl = slots[s];
    if (sl.kind == SlotKind::kSymmetric) {
      for (int i = 0; i < sl.rows; ++i)
        for (int j = i; j < sl.rows; ++j) coords.push_back({s, i, j});
    } else {
      for (int j = 0; j < sl.cols; ++j)
        for (int i = 0; i < sl.rows; ++i) coords.push_back({s, i, j});
    }
  }
  return coords;
}

Eigen::MatrixXd UnitValue(const Slot& sl, const Coord& c) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(sl.rows, sl.cols);
  v(c.i, c.j) = 1.0;
  if (sl.kind == SlotKind::kSymmetric) v(c.j, c.i) = 1.0;
  return v;
}

Assignment ToAssignment(const LmiProgram& program,
                        const std::vector<Coord>& coords,
                        const Eigen::VectorXd& x) {
  Assignment a = ZeroAssignment(program);
  for (size_t k = 0; k < coords.size(); ++k) {
    const Coord& c = coords[k];
    a[c.slot](c.i, c.j) = x(k);
    if (program.slots()[c.slot].kind == SlotKind::kSymmetric) {
      a[c.slot](c.j, c.i) = x(k);
    }
  }
  return a;
}

// F0 + sum_k x_k F_k with only the nonzero F_k kept.
struct AffineBlock {
  Eigen::MatrixXd F0;
  std::vector<int> index;
  std::vector<Eigen::MatrixXd> F;
  double objective_weight{0.0};  // > 0 for a log-det objective block

  int dim() const { return static_cast<int>(F0.rows()); }

  Eigen::MatrixXd Eval(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd m = F0;
    for (size_t k = 0; k < index.size(); ++k) {
      const double xi = x(index[k]);
      if (xi != 0.0) m += xi * F[k];
    }
    return m;
  }
};

// Keeps only rows/cols that are not identically zero in every coefficient.
AffineBlock ReduceStructuralZeros(const AffineBlock& b) {
  const int m = b.dim();
  std::vector<int> keep;
  for (int r = 0; r < m; ++r) {
    bool nonzero = b.F0.row(r).cwiseAbs().maxCoeff() > 0.0;
    for (size_t k = 0; !nonzero && k < b.F.size(); ++k) {
      nonzero = b.F[k].row(r).cwiseAbs().maxCoeff() > 0.0;
    }
    if (nonzero) keep.push_back(r);
  }
  if (static_cast<int>(keep.size()) == m) return b;
  auto take = [&keep](const Eigen::MatrixXd& src) {
    const int q = static_cast<int>(keep.size());
    Eigen::MatrixXd dst(q, q);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) dst(i, j) = src(keep[i], keep[j]);
    return dst;
  };
  AffineBlock out;
  out.F0 = take(b.F0);
  out.objective_weight = b.objective_weight;
  for (size_t k = 0; k < b.F.size(); ++k) {
    Eigen::MatrixXd fk = take(b.F[k]);
    if (fk.cwiseAbs().maxCoeff() > 0.0) {
      out.index.push_back(b.index[k]);
      out.F.push_back(std::move(fk));
    }
  }
  return out;
}

AffineBlock ConstraintBlock(const LmiProgram& program, const BlockLmi& lmi,
                            const std::vector<Coord>& coords) {
  const auto& slots = program.slots();
  AffineBlock b;
  b.F0 = Eigen::MatrixXd::Zero(lmi.dim(), lmi.dim());
  for (const LmiTerm& t : lmi.terms()) {
    if (t.slot < 0) Accumulate(lmi, t, Eigen::MatrixXd(), &b.F0);
  }
  for (size_t k = 0; k < coords.size(); ++k) {
    const Coord& c = coords[k];
    const Slot& sl = slots[c.slot];
    const Eigen::MatrixXd unit = UnitValue(sl, c);
    Eigen::MatrixXd fk = Eigen::MatrixXd::Zero(lmi.dim(), lmi.dim());
    bool touched = false;
    for (const LmiTerm& t : lmi.terms()) {
      if (t.slot != c.slot) continue;
      Accumulate(lmi, t, unit, &fk);
      touched = true;
    }
    if (touched && fk.cwiseAbs().maxCoeff() > 0.0) {
      b.index.push_back(static_cast<int>(k));
      b.F.push_back(0.5 * (fk + fk.transpose()));
    }
  }
  return ReduceStructuralZeros(b);
}

AffineBlock SlotBlock(const LmiProgram& program, int slot,
                      const std::vector<Coord>& coords) {
  const Slot& sl = program.slots()[slot];
  AffineBlock b;
  b.F0 = Eigen::MatrixXd::Zero(sl.rows, sl.rows);
  for (size_t k = 0; k < coords.size(); ++k) {
    if (coords[k].slot != slot) continue;
    b.index.push_back(static_cast<int>(k));
    b.F.push_back(UnitValue(sl, coords[k]));
  }
  return b;
}

// Barrier problem:
//   minimize t c'x - sum_b kappa_b log det B_b(x) - box terms,
// where kappa_b = 1 for constraint blocks and t w_b for log-det objectives.
class BarrierProblem {
 public:
  BarrierProblem(int n, Eigen::VectorXd c, std::vector<AffineBlock> blocks,
                 double box)
      : n_(n), c_(std::move(c)), blocks_(std::move(blocks)), box_(box) {
    for (const AffineBlock& b : blocks_) {
      m_ += b.objective_weight > 0.0 ? b.objective_weight * b.dim() : b.dim();
    }
    if (box_ > 0.0) m_ += 2.0 * n_;
  }

  double barrier_dim() const { return m_; }

  // Objective of the original problem (without barrier).
  double Objective(const Eigen::VectorXd& x) const {
    double f = c_.dot(x);
    for (const AffineBlock& b : blocks_) {
      if (b.objective_weight <= 0.0) continue;
      Eigen::LLT<Eigen::MatrixXd> llt(b.Eval(x));
      if (llt.info() != Eigen::Success) {
        return std::numeric_limits<double>::infinity();
      }
      f -= b.objective_weight * 2.0 *
           llt.matrixLLT().diagonal().array().log().sum();
    }
    return f;
  }

  double Phi(const Eigen::VectorXd& x, double t) const {
    double v = t * c_.dot(x);
    for (const AffineBlock& b : blocks_) {
      Eigen::LLT<Eigen::MatrixXd> llt(b.Eval(x));
      if (llt.info() != Eigen::Success) {
        return std::numeric_limits<double>::infinity();
      }
      const double ld = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
      if (!std::isfinite(ld)) return std::numeric_limits<double>::infinity();
      v -= Kappa(b, t) * ld;
    }
    if (box_ > 0.0) {
      for (int i = 0; i < n_; ++i) {
        const double lo = box_ + x(i);
        const double hi = box_ - x(i);
        if (lo <= 0.0 || hi <= 0.0) {
          return std::numeric_limits<double>::infinity();
        }
        v -= std::log(lo) + std::log(hi);
      }
    }
    return v;
  }

  bool GradHess(const Eigen::VectorXd& x, double t, Eigen::VectorXd* g,
                Eigen::MatrixXd* h) const {
    *g = t * c_;
    h->setZero(n_, n_);
    std::vector<Eigen::MatrixXd> s;
    for (const AffineBlock& b : blocks_) {
      Eigen::LLT<Eigen::MatrixXd> llt(b.Eval(x));
      if (llt.info() != Eigen::Success) return false;
      const double kap = Kappa(b, t);
      const int m = b.dim();
      const Eigen::MatrixXd linv = llt.matrixL().solve(
          Eigen::MatrixXd::Identity(m, m));
      const size_t q = b.index.size();
      s.resize(q);
      for (size_t k = 0; k < q; ++k) {
        s[k] = linv * b.F[k] * linv.transpose();
        (*g)(b.index[k]) -= kap * s[k].trace();
      }
      for (size_t k = 0; k < q; ++k) {
        for (size_t l = k; l < q; ++l) {
          const double v = kap * s[k].cwiseProduct(s[l]).sum();
          (*h)(b.index[k], b.index[l]) += v;
          if (l != k) (*h)(b.index[l], b.index[k]) += v;
        }
      }
    }
    if (box_ > 0.0) {
      for (int i = 0; i < n_; ++i) {
        const double lo = 1.0 / (box_ + x(i));
        const double hi = 1.0 / (box_ - x(i));
        (*g)(i) += -lo + hi;
        (*h)(i, i) += lo * lo + hi * hi;
      }
    }
    return g->allFinite() && h->allFinite();
  }

  bool Feasible(const Eigen::VectorXd& x) const {
    return std::isfinite(Phi(x, 1.0));
  }

  const std::vector<AffineBlock>& blocks() const { return blocks_; }

 private:
  static double Kappa(const AffineBlock& b, double t) {
    return b.objective_weight > 0.0 ? t * b.objective_weight : 1.0;
  }

  int n_;
  Eigen::VectorXd c_;
  std::vector<AffineBlock> blocks_;
  double box_;
  double m_{0.0};
};

enum class RunResult { kConverged, kStopped, kTrouble };

// Barrier method from a strictly feasible x. `stop` is checked after every
// centering and allows an early exit (phase I).
RunResult RunBarrier(const BarrierProblem& bp, Eigen::VectorXd* x, double t0,
                     const SolverOptions& opts, int* steps,
                     const std::function<bool(const Eigen::VectorXd&, double)>&
                         stop) {
  const int n = static_cast<int>(x->size());
  double t = t0;
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  for (int outer = 0; outer < 200; ++outer) {
    for (int inner = 0; inner < 100; ++inner) {
      if (!bp.GradHess(*x, t, &g, &h)) return RunResult::kTrouble;
      Eigen::VectorXd d = h.diagonal().cwiseMax(1e-300).cwiseSqrt();
      Eigen::MatrixXd hs = h.array() / (d * d.transpose()).array();
      hs.diagonal().array() += 1e-13;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hs);
      if (ldlt.info() != Eigen::Success) return RunResult::kTrouble;
      Eigen::VectorXd dx =
          -(ldlt.solve(g.cwiseQuotient(d))).cwiseQuotient(d);
      if (!dx.allFinite()) return RunResult::kTrouble;
      const double slope = g.dot(dx);
      if (-slope / 2.0 < 1e-10) break;
      const double f0 = bp.Phi(*x, t);
      double s = 1.0;
      Eigen::VectorXd trial = *x + dx;
      while (!(bp.Phi(trial, t) <= f0 + 0.25 * s * slope)) {
        s *= 0.5;
        if (s < 1e-14) break;
        trial = *x + s * dx;
      }
      if (s < 1e-14) break;
      *x = trial;
      if (++(*steps) > opts.max_newton) return RunResult::kTrouble;
    }
    if (stop && stop(*x, t)) return RunResult::kStopped;
    const double f = bp.Objective(*x);
    if (bp.barrier_dim() / t < opts.gap_tol * std::max(1.0, std::abs(f))) {
      return RunResult::kConverged;
    }
    t *= opts.mu;
  }
  (void)n;
  return RunResult::kTrouble;
}

}  // namespace

SdpSolution Solve(const LmiProgram& program, const SolverOptions& opts) {
  SdpSolution sol;
  const std::vector<Coord> coords = Coordinates(program);
  const int n = static_cast<int>(coords.size());
  const auto& slots = program.slots();

  std::vector<AffineBlock> blocks;
  for (const BlockLmi& lmi : program.constraints()) {
    AffineBlock b = ConstraintBlock(program, lmi, coords);
    if (b.dim() > 0) blocks.push_back(std::move(b));
  }
  std::vector<bool> in_logdet(slots.size(), false);
  for (auto [slot, w] : program.logdet_terms()) {
    AffineBlock b = SlotBlock(program, slot, coords);
    b.objective_weight = w;
    blocks.push_back(std::move(b));
    in_logdet[slot] = true;
  }
  for (int s = 0; s < static_cast<int>(slots.size()); ++s) {
    if (!slots[s].sign_constrained || in_logdet[s]) continue;
    blocks.push_back(SlotBlock(program, s, coords));
  }

  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  for (auto [slot, w] : program.trace_terms()) {
    for (int k = 0; k < n; ++k) {
      if (coords[k].slot == slot && coords[k].i == coords[k].j) c(k) += w;
    }
  }

  // Phase I: minimize s subject to B_b(x) + s I > 0, s >= -1.
  std::vector<AffineBlock> p1;
  for (const AffineBlock& b : blocks) {
    AffineBlock e = b;
    e.objective_weight = 0.0;
    e.index.push_back(n);
    e.F.push_back(Eigen::MatrixXd::Identity(b.dim(), b.dim()));
    p1.push_back(std::move(e));
  }
  {
    AffineBlock lb;
    lb.F0 = Eigen::MatrixXd::Ones(1, 1);
    lb.index.push_back(n);
    lb.F.push_back(Eigen::MatrixXd::Ones(1, 1));
    p1.push_back(std::move(lb));
  }
  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n + 1);
  c1(n) = 1.0;
  BarrierProblem phase1(n + 1, c1, p1, opts.phase1_box);
  Eigen::VectorXd x1 = Eigen::VectorXd::Zero(n + 1);
  double worst = 0.0;
  for (const AffineBlock& b : blocks) {
    worst = std::min(worst, MinEigSym(b.Eval(x1.head(n))));
  }
  x1(n) = 1.0 - worst;
  int steps = 0;
  bool infeasible = false;
  auto p1_stop = [&](const Eigen::VectorXd& x, double t) {
    if (x(n) < 0.0) return true;
    if (x(n) - phase1.barrier_dim() / t > 0.0) {
      infeasible = true;
      return true;
    }
    return false;
  };
  const RunResult r1 = RunBarrier(phase1, &x1, 1.0, opts, &steps, p1_stop);
  sol.newton_steps = steps;
  if (infeasible || (r1 == RunResult::kConverged && x1(n) >= 0.0)) {
    sol.status = SolveStatus::kInfeasible;
    sol.message = "phase I: no strictly feasible point";
    return sol;
  }
  if (r1 == RunResult::kTrouble || x1(n) >= 0.0) {
    sol.status = SolveStatus::kNumericalTrouble;
    sol.message = "phase I did not finish";
    return sol;
  }

  BarrierProblem main(n, c, blocks, 0.0);
  Eigen::VectorXd x = x1.head(n);
  if (!main.Feasible(x)) {
    sol.status = SolveStatus::kNumericalTrouble;
    sol.message = "phase I point not interior";
    return sol;
  }
  const RunResult r2 = RunBarrier(main, &x, 1.0, opts, &steps, nullptr);
  sol.newton_steps = steps;
  sol.values = ToAssignment(program, coords, x);
  sol.objective = EvaluateObjective(program, sol.values);
  sol.certificate = VerifyCertificate(program, sol.values);
  sol.min_certificate = sol.certificate.empty()
                            ? 0.0
                            : *std::min_element(sol.certificate.begin(),
                                                sol.certificate.end());
  if (r2 != RunResult::kConverged) {
    sol.status = SolveStatus::kNumericalTrouble;
    sol.message = "barrier iterations did not converge";
  } else if (!std::isfinite(sol.objective) ||
             sol.min_certificate < -opts.feas_tol) {
    sol.status = SolveStatus::kNumericalTrouble;
    sol.message = "certificate check failed";
  } else {
    sol.status = SolveStatus::kOptimal;
  }
  return sol;
}

GridOutcome GridSearch(const ProgramBuilder& build,
                       const std::vector<std::vector<double>>& grid,
                       const SolverOptions& opts, Execution exec, int jobs) {
  if (grid.empty()) {
    throw PecError(ErrorCode::kAllInfeasible, "empty grid");
  }
  const int n = static_cast<int>(grid.size());
  std::vector<SdpSolution> sols(n);
  std::vector<std::exception_ptr> errs(n);
  auto run = [&](int i) {
    try {
      sols[i] = Solve(build(grid[i]), opts);
    } catch (...) {
      errs[i] = std::current_exception();
    }
  };
  if (exec == Execution::kParallel) {
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int i = 0; i < n; ++i) run(i);
  } else {
    for (int i = 0; i < n; ++i) run(i);
  }
  for (int i = 0; i < n; ++i) {
    if (errs[i]) std::rethrow_exception(errs[i]);
  }

  GridOutcome out;
  for (int i = 0; i < n; ++i) {
    out.statuses.push_back(sols[i].status);
    out.objectives.push_back(sols[i].ok()
                                 ? sols[i].objective
                                 : std::numeric_limits<double>::quiet_NaN());
    if (!sols[i].ok()) continue;
    if (out.best_index < 0 || sols[i].objective < out.best.objective) {
      out.best_index = i;
      out.best = sols[i];
    }
  }
  if (out.best_index < 0) {
    throw PecError(ErrorCode::kAllInfeasible,
                   "no grid point gave an optimal solution");
  }
  out.best_point = grid[out.best_index];
  return out;
}

std::vector<double> LogSpace(double lo, double hi, int n) {
  std::vector<double> v(n);
  if (n == 1) return {lo};
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < n; ++i) v[i] = std::pow(10.0, a + (b - a) * i / (n - 1));
  return v;
}

std::vector<double> LinSpace(double lo, double hi, int n) {
  std::vector<double> v(n);
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

std::vector<std::vector<double>> GridProduct(
    const std::vector<std::vector<double>>& axes) {
  std::vector<std::vector<double>> out{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : out) {
      for (double v : axis) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace pec
