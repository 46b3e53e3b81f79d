#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "pec/lmi_engine.h"
#include "pec/model.h"

namespace pec {

enum class DisturbanceMode {
  kZero,
  // Piecewise constant with a fixed dwell, drawn uniformly on the boundary
  // of the bounding ellipsoid.
  kBoundaryRandom,
};

// Residual-steering sensor attack. From `start` on, the attacker sets the
// residual of every attacked channel to amplitude * sin(frequency * t), i.e.
//   delta = Gamma^+ (r_cmd - C e - H v).
// With `guard` on, the attacker knows Pi and shrinks r_cmd by the largest
// factor in [0, 1] that keeps r' Pi r <= 1.
struct StealthyFdi {
  std::vector<int> sensors{1};
  double start{125.0};
  double amplitude{0.1};
  double frequency{0.25};
  bool guard{true};
};

struct SimConfig {
  double dt{1e-3};
  double horizon{250.0};
  std::uint64_t seed{1};
  DisturbanceMode disturbance{DisturbanceMode::kZero};
  double dwell{1.0};
  std::optional<StealthyFdi> attack;
  // Keep every k-th step in the trace. Alarm and stealth statistics always
  // cover every step.
  int record_every{1};
};

struct SimInitial {
  Eigen::VectorXd x;     // plant state (zero if empty)
  Eigen::VectorXd xhat;  // observer state (zero if empty)
  Eigen::VectorXd rho;   // controller state (zero if empty)
};

// One row per recorded step (including t = 0).
struct SimTrace {
  Eigen::VectorXd time;
  Eigen::MatrixXd x, xhat, e, rho, u, y, ytilde, r, v, w, delta;
  Eigen::VectorXd stealth;  // r' Pi r
  std::vector<std::uint8_t> alarm;
  // Over every integration step, recorded or not.
  int alarm_count{0};
  double max_stealth{0.0};

  int rows() const { return static_cast<int>(time.size()); }
};

// Plant + observer-based detector + controller (base or realized), fixed
// step RK4. Throws StepTooLarge if dt > 0.1 / (spectral radius of the
// nominal interconnection).
SimTrace Simulate(const LtiPlant& plant, const BaseController& controller,
                  const Eigen::Ref<const Eigen::MatrixXd>& l, const SymMat& pi,
                  const DisturbanceBounds& bounds, const SimConfig& cfg,
                  const SimInitial& init = {});

// State matrix of the nominal (x, xhat, rho) interconnection.
Eigen::MatrixXd InterconnectionMatrix(const LtiPlant& plant,
                                      const BaseController& controller,
                                      const Eigen::Ref<const Eigen::MatrixXd>& l);

// Columns: time, x1.., u1.., r1.., stealth, alarm; 17 significant digits.
void WriteTraceCsv(const SimTrace& trace, std::ostream& out);

// z' = A z + sum_k B_k w_k with each w_k on the boundary of its ellipsoid.
struct InputChannel {
  Eigen::MatrixXd B;
  SymMat W;
};

struct EnvelopeConfig {
  double dt{0.01};
  double discard{0.0};  // transient skipped before recording
  double horizon{200.0};
  double dwell{1.0};
  std::uint64_t seed{1};
  int samples{500};
};

// dt = min(0.05, 0.1 / spectral radius), discard = 5 slowest time
// constants, horizon = discard + 200 s.
EnvelopeConfig DefaultEnvelopeConfig(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                     int samples = 500, std::uint64_t seed = 1);

// Largest z' P z over all post-transient states of all samples, starting
// from z = 0. Per-sample seeds make the result independent of scheduling.
double MonteCarloEnvelope(const Eigen::Ref<const Eigen::MatrixXd>& a,
                          const std::vector<InputChannel>& channels,
                          const SymMat& p, const EnvelopeConfig& cfg,
                          Execution exec = Execution::kParallel, int jobs = 0);

// Uniform sample on {w : w' W w = 1}.
Eigen::VectorXd SampleEllipsoidBoundary(const SymMat& w, std::uint64_t seed,
                                        std::uint64_t stream);

// Unforced RK4 trajectory of z' = A z, one row per step.
Eigen::MatrixXd SimulateAutonomous(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                   const Eigen::Ref<const Eigen::VectorXd>& z0,
                                   double dt, int steps);

}  // namespace pec
