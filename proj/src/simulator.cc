#include "pec/simulator.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>

#include <omp.h>

namespace pec {

namespace {

Eigen::MatrixXd InverseSqrt(const SymMat& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.matrix());
  return es.operatorInverseSqrt();
}

Eigen::VectorXd BoundaryDraw(const Eigen::MatrixXd& w_isqrt,
                             std::mt19937_64* rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = static_cast<int>(w_isqrt.rows());
  Eigen::VectorXd u(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) u(i) = normal(*rng);
    norm = u.norm();
  } while (norm < 1e-12);
  return w_isqrt * (u / norm);
}

std::mt19937_64 StreamRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

Eigen::VectorXd OrZero(const Eigen::VectorXd& v, int n) {
  if (v.size() == 0) return Eigen::VectorXd::Zero(n);
  if (v.size() != n) {
    throw PecError(ErrorCode::kDimensionMismatch, "initial state size");
  }
  return v;
}

}  // namespace

Eigen::VectorXd SampleEllipsoidBoundary(const SymMat& w, std::uint64_t seed,
                                        std::uint64_t stream) {
  std::mt19937_64 rng = StreamRng(seed, stream);
  return BoundaryDraw(InverseSqrt(w), &rng);
}

Eigen::MatrixXd InterconnectionMatrix(
    const LtiPlant& plant, const BaseController& k,
    const Eigen::Ref<const Eigen::MatrixXd>& l) {
  const int nx = plant.nx();
  const int nr = k.nrho();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * nx + nr, 2 * nx + nr);
  const Eigen::MatrixXd bdc = plant.B * k.Dc * plant.C;
  m.block(0, 0, nx, nx) = plant.A + bdc;
  m.block(0, 2 * nx, nx, nr) = plant.B * k.Cc;
  m.block(nx, 0, nx, nx) = bdc + l * plant.C;
  m.block(nx, nx, nx, nx) = plant.A - l * plant.C;
  m.block(nx, 2 * nx, nx, nr) = plant.B * k.Cc;
  m.block(2 * nx, 0, nr, nx) = k.Bc * plant.C;
  m.block(2 * nx, 2 * nx, nr, nr) = k.Ac;
  return m;
}

namespace {

struct Signals {
  Eigen::VectorXd r, ytilde, u, delta;
  double stealth{0.0};
};

class Loop {
 public:
  Loop(const LtiPlant& plant, const BaseController& k,
       const Eigen::Ref<const Eigen::MatrixXd>& l, const SymMat& pi,
       const std::optional<StealthyFdi>& attack)
      : plant_(plant), k_(k), l_(l), pi_(pi.matrix()), attack_(attack) {
    if (attack_) {
      sc_ = MakeScenario(plant.ny(), attack_->sensors);
      proj_ = sc_.Projector();
    }
  }

  int nx() const { return plant_.nx(); }
  int nr() const { return k_.nrho(); }
  int nattack() const { return attack_ ? sc_.size() : 0; }

  Signals Evaluate(double t, const Eigen::VectorXd& s,
                   const Eigen::VectorXd& v) const {
    const int n = nx();
    const auto x = s.segment(0, n);
    const auto xhat = s.segment(n, n);
    Signals out;
    const Eigen::VectorXd r_free = plant_.C * (x - xhat) + plant_.H * v;
    out.r = r_free;
    out.delta = Eigen::VectorXd::Zero(nattack());
    if (attack_ && t >= attack_->start) {
      const double cmd = attack_->amplitude * std::sin(attack_->frequency * t);
      const Eigen::VectorXd r0 = r_free - proj_ * r_free;
      const Eigen::VectorXd d = sc_.Gamma * Eigen::VectorXd::Constant(
                                                 sc_.size(), cmd);
      double lambda = 1.0;
      if (attack_->guard) lambda = StealthScale(r0, d);
      out.r = r0 + lambda * d;
      out.delta = sc_.Gamma_pinv * (out.r - r_free);
    }
    out.ytilde = plant_.C * x + plant_.H * v;
    if (attack_) out.ytilde += sc_.Gamma * out.delta;
    out.u = k_.Cc * s.segment(2 * n, nr()) + k_.Dc * out.ytilde;
    out.stealth = out.r.dot(pi_ * out.r);
    return out;
  }

  Eigen::VectorXd Derivative(double t, const Eigen::VectorXd& s,
                             const Eigen::VectorXd& w,
                             const Eigen::VectorXd& v) const {
    const int n = nx();
    const Signals sig = Evaluate(t, s, v);
    Eigen::VectorXd ds(s.size());
    const auto x = s.segment(0, n);
    const auto xhat = s.segment(n, n);
    const auto rho = s.segment(2 * n, nr());
    ds.segment(0, n) = plant_.A * x + plant_.B * sig.u + plant_.G * w;
    ds.segment(n, n) = plant_.A * xhat + plant_.B * sig.u +
                       l_ * (sig.ytilde - plant_.C * xhat);
    ds.segment(2 * n, nr()) = k_.Ac * rho + k_.Bc * sig.ytilde;
    return ds;
  }

 private:
  // Largest lambda in [0, 1] with (r0 + lambda d)' Pi (r0 + lambda d) <= 1.
  double StealthScale(const Eigen::VectorXd& r0,
                      const Eigen::VectorXd& d) const {
    const double a = d.dot(pi_ * d);
    const double b = 2.0 * r0.dot(pi_ * d);
    const double c = r0.dot(pi_ * r0) - 1.0;
    if (a + b + c <= 0.0) return 1.0;
    if (c > 0.0 || a <= 0.0) return 0.0;
    const double disc = std::max(0.0, b * b - 4.0 * a * c);
    // c <= 0 so the larger root is >= 0; shave a hair so rounding cannot
    // push the quadratic form above the threshold.
    const double root = (-b + std::sqrt(disc)) / (2.0 * a);
    return std::clamp(root * (1.0 - 1e-12), 0.0, 1.0);
  }

  const LtiPlant& plant_;
  const BaseController& k_;
  Eigen::MatrixXd l_;
  Eigen::MatrixXd pi_;
  std::optional<StealthyFdi> attack_;
  AttackScenario sc_;
  Eigen::MatrixXd proj_;
};

}  // namespace

SimTrace Simulate(const LtiPlant& plant, const BaseController& controller,
                  const Eigen::Ref<const Eigen::MatrixXd>& l, const SymMat& pi,
                  const DisturbanceBounds& bounds, const SimConfig& cfg,
                  const SimInitial& init) {
  const int nx = plant.nx();
  const int nr = controller.nrho();
  const int ny = plant.ny();
  if (controller.Bc.cols() != ny || controller.Dc.rows() != plant.nu() ||
      l.rows() != nx || l.cols() != ny || pi.dim() != ny) {
    throw PecError(ErrorCode::kDimensionMismatch, "simulation dims");
  }
  if (!(cfg.dt > 0.0) || !(cfg.horizon >= cfg.dt) || cfg.record_every < 1 ||
      !(cfg.dwell > 0.0)) {
    throw PecError(ErrorCode::kDimensionMismatch, "bad simulation config");
  }
  const double radius =
      SpectralRadius(InterconnectionMatrix(plant, controller, l));
  if (radius > 0.0 && cfg.dt > 0.1 / radius) {
    throw PecError(ErrorCode::kStepTooLarge,
                   "dt = " + std::to_string(cfg.dt) + " exceeds " +
                       std::to_string(0.1 / radius));
  }
  if (cfg.attack && cfg.attack->start > cfg.horizon) {
    throw PecError(ErrorCode::kDimensionMismatch, "attack after horizon");
  }

  const Loop loop(plant, controller, l, pi, cfg.attack);
  const int steps = static_cast<int>(std::llround(cfg.horizon / cfg.dt));
  const int intervals =
      static_cast<int>(std::ceil(cfg.horizon / cfg.dwell)) + 1;

  std::vector<Eigen::VectorXd> ws(intervals, Eigen::VectorXd::Zero(plant.nw()));
  std::vector<Eigen::VectorXd> vs(intervals, Eigen::VectorXd::Zero(plant.nv()));
  if (cfg.disturbance == DisturbanceMode::kBoundaryRandom) {
    std::mt19937_64 rng = StreamRng(cfg.seed, 0);
    const Eigen::MatrixXd wi = InverseSqrt(bounds.W_w);
    const Eigen::MatrixXd vi = InverseSqrt(bounds.W_v);
    for (int k = 0; k < intervals; ++k) {
      ws[k] = BoundaryDraw(wi, &rng);
      vs[k] = BoundaryDraw(vi, &rng);
    }
  }

  Eigen::VectorXd s(2 * nx + nr);
  s.segment(0, nx) = OrZero(init.x, nx);
  s.segment(nx, nx) = OrZero(init.xhat, nx);
  s.segment(2 * nx, nr) = OrZero(init.rho, nr);

  const int rows = steps / cfg.record_every + 1;
  SimTrace tr;
  tr.time.resize(rows);
  for (Eigen::MatrixXd* m : {&tr.x, &tr.xhat, &tr.e}) m->resize(rows, nx);
  tr.rho.resize(rows, nr);
  tr.u.resize(rows, plant.nu());
  for (Eigen::MatrixXd* m : {&tr.y, &tr.ytilde, &tr.r}) m->resize(rows, ny);
  tr.v.resize(rows, plant.nv());
  tr.w.resize(rows, plant.nw());
  tr.delta.resize(rows, loop.nattack());
  tr.stealth.resize(rows);
  tr.alarm.resize(rows);

  auto interval_of = [&](int k) {
    return std::min(intervals - 1,
                    static_cast<int>(std::floor(k * cfg.dt / cfg.dwell + 1e-9)));
  };
  auto observe = [&](int k) {
    const double t = k * cfg.dt;
    const int iv = interval_of(k);
    const Signals sig = loop.Evaluate(t, s, vs[iv]);
    const bool alarm = sig.stealth > 1.0;
    tr.alarm_count += alarm ? 1 : 0;
    tr.max_stealth = std::max(tr.max_stealth, sig.stealth);
    if (k % cfg.record_every != 0) return;
    const int row = k / cfg.record_every;
    tr.time(row) = t;
    tr.x.row(row) = s.segment(0, nx);
    tr.xhat.row(row) = s.segment(nx, nx);
    tr.e.row(row) = s.segment(0, nx) - s.segment(nx, nx);
    tr.rho.row(row) = s.segment(2 * nx, nr);
    tr.u.row(row) = sig.u;
    tr.y.row(row) = plant.C * s.segment(0, nx);
    tr.ytilde.row(row) = sig.ytilde;
    tr.r.row(row) = sig.r;
    tr.v.row(row) = vs[iv];
    tr.w.row(row) = ws[iv];
    tr.delta.row(row) = sig.delta;
    tr.stealth(row) = sig.stealth;
    tr.alarm[row] = alarm ? 1 : 0;
  };

  observe(0);
  const double h = cfg.dt;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const int iv = interval_of(k);
    const Eigen::VectorXd& w = ws[iv];
    const Eigen::VectorXd& v = vs[iv];
    const Eigen::VectorXd k1 = loop.Derivative(t, s, w, v);
    const Eigen::VectorXd k2 = loop.Derivative(t + h / 2, s + h / 2 * k1, w, v);
    const Eigen::VectorXd k3 = loop.Derivative(t + h / 2, s + h / 2 * k2, w, v);
    const Eigen::VectorXd k4 = loop.Derivative(t + h, s + h * k3, w, v);
    s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    observe(k + 1);
  }
  return tr;
}

void WriteTraceCsv(const SimTrace& tr, std::ostream& out) {
  out << "time";
  for (int i = 0; i < tr.x.cols(); ++i) out << ",x" << i + 1;
  for (int i = 0; i < tr.u.cols(); ++i) out << ",u" << i + 1;
  for (int i = 0; i < tr.r.cols(); ++i) out << ",r" << i + 1;
  out << ",stealth,alarm\n";
  out << std::setprecision(17);
  for (int k = 0; k < tr.rows(); ++k) {
    out << tr.time(k);
    for (int i = 0; i < tr.x.cols(); ++i) out << ',' << tr.x(k, i);
    for (int i = 0; i < tr.u.cols(); ++i) out << ',' << tr.u(k, i);
    for (int i = 0; i < tr.r.cols(); ++i) out << ',' << tr.r(k, i);
    out << ',' << tr.stealth(k) << ',' << static_cast<int>(tr.alarm[k])
        << '\n';
  }
}

EnvelopeConfig DefaultEnvelopeConfig(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                     int samples, std::uint64_t seed) {
  if (!IsHurwitz(a)) {
    throw PecError(ErrorCode::kNotStable, "envelope needs a Hurwitz matrix");
  }
  EnvelopeConfig cfg;
  const double radius = SpectralRadius(a);
  cfg.dt = std::min(0.05, 0.1 / radius);
  cfg.discard = 5.0 / (-SpectralAbscissa(a));
  cfg.horizon = cfg.discard + 200.0;
  cfg.samples = samples;
  cfg.seed = seed;
  return cfg;
}

double MonteCarloEnvelope(const Eigen::Ref<const Eigen::MatrixXd>& a,
                          const std::vector<InputChannel>& channels,
                          const SymMat& p, const EnvelopeConfig& cfg,
                          Execution exec, int jobs) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || p.dim() != n) {
    throw PecError(ErrorCode::kDimensionMismatch, "envelope dims");
  }
  for (const InputChannel& ch : channels) {
    if (ch.B.rows() != n || ch.B.cols() != ch.W.dim()) {
      throw PecError(ErrorCode::kDimensionMismatch, "channel dims");
    }
  }
  if (!IsHurwitz(a)) {
    throw PecError(ErrorCode::kNotStable, "envelope needs a Hurwitz matrix");
  }
  if (cfg.samples < 1 || !(cfg.dt > 0.0)) {
    throw PecError(ErrorCode::kDimensionMismatch, "bad envelope config");
  }
  const double radius = SpectralRadius(a);
  if (cfg.dt > 0.1 / radius) {
    throw PecError(ErrorCode::kStepTooLarge, "envelope dt too large");
  }
  std::vector<Eigen::MatrixXd> isq;
  for (const InputChannel& ch : channels) isq.push_back(InverseSqrt(ch.W));

  const Eigen::MatrixXd am = a;
  const Eigen::MatrixXd pm = p.matrix();
  const int steps = static_cast<int>(std::llround(cfg.horizon / cfg.dt));
  const int per_dwell = std::max(1, static_cast<int>(std::llround(
                                        cfg.dwell / cfg.dt)));
  const int first = static_cast<int>(std::ceil(cfg.discard / cfg.dt));
  // Exact discretization of the piecewise-constant input over one step.
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = am * cfg.dt;
  aug.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n) * cfg.dt;
  // exp(aug) by scaling and squaring of a Taylor series; |aug| is small.
  Eigen::MatrixXd e = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  {
    int sq = 0;
    double norm = aug.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.5) {
      norm /= 2;
      ++sq;
    }
    const Eigen::MatrixXd x = aug / std::pow(2.0, sq);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    for (int k = 1; k < 20; ++k) {
      term = term * x / k;
      e += term;
    }
    for (int k = 0; k < sq; ++k) e = e * e;
  }
  const Eigen::MatrixXd ad = e.topLeftCorner(n, n);
  const Eigen::MatrixXd gd = e.topRightCorner(n, n);

  std::vector<double> best(cfg.samples, 0.0);
  auto run = [&](int i) {
    std::mt19937_64 rng = StreamRng(cfg.seed, static_cast<std::uint64_t>(i));
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd force = Eigen::VectorXd::Zero(n);
    double m = 0.0;
    for (int k = 0; k < steps; ++k) {
      if (k % per_dwell == 0) {
        force.setZero();
        for (size_t c = 0; c < channels.size(); ++c) {
          force += channels[c].B * BoundaryDraw(isq[c], &rng);
        }
        force = gd * force;
      }
      z = ad * z + force;
      if (k + 1 >= first) m = std::max(m, z.dot(pm * z));
    }
    best[i] = m;
  };
  if (exec == Execution::kParallel) {
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (int i = 0; i < cfg.samples; ++i) run(i);
  } else {
    for (int i = 0; i < cfg.samples; ++i) run(i);
  }
  return *std::max_element(best.begin(), best.end());
}

Eigen::MatrixXd SimulateAutonomous(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                   const Eigen::Ref<const Eigen::VectorXd>& z0,
                                   double dt, int steps) {
  Eigen::MatrixXd out(steps + 1, z0.size());
  Eigen::VectorXd z = z0;
  out.row(0) = z;
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd k1 = a * z;
    const Eigen::VectorXd k2 = a * (z + dt / 2 * k1);
    const Eigen::VectorXd k3 = a * (z + dt / 2 * k2);
    const Eigen::VectorXd k4 = a * (z + dt * k3);
    z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.row(k + 1) = z;
  }
  return out;
}

}  // namespace pec
