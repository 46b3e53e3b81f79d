// pec: command-line driver for the realization toolkit.
//
// Exit codes: 0 when every solve is optimal and every certificate verifies,
// 1 on solver or certificate failure, 2 on usage, file, or parse errors.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pec/io.h"
#include "pec/pipeline.h"
#include "pec/quadtank_case.h"
#include "pec/simulator.h"

namespace {

using namespace pec;

constexpr double kCertTol = 1e-6;

struct Common {
  std::string model;
  std::vector<int> scenario;
  std::vector<double> alpha_grid;
  std::vector<double> alpha_r_grid;
  double feas_tol{1e-7};
  std::uint64_t seed{1};
  int jobs{0};
  std::string out_dir;
};

struct SimFlags {
  std::string realization;
  std::string residual;
  std::vector<int> attack_sensors;
  double attack_start{125.0};
  double amplitude{0.1};
  double frequency{0.25};
  double horizon{250.0};
  double dt{1e-2};
  std::string disturbance{"random"};
  bool unguarded{false};
  bool no_attack{false};
  int record_every{1};
  std::string out{"trace.csv"};
};

std::string OutDir(const Common& c) {
  std::string dir = c.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("PEC_OUT_DIR");
    dir = env ? env : ".";
  }
  std::filesystem::create_directories(dir);
  return dir;
}

std::string OutPath(const Common& c, const std::string& name) {
  return (std::filesystem::path(OutDir(c)) / name).string();
}

std::string FileTag(const std::vector<int>& sensors) {
  std::string tag;
  for (size_t i = 0; i < sensors.size(); ++i) {
    tag += (i ? "-" : "") + std::to_string(sensors[i]);
  }
  return tag;
}

RunOptions Options(const Common& c) {
  RunOptions o;
  o.solver.feas_tol = c.feas_tol;
  o.alpha_grid = c.alpha_grid;
  o.alpha_r_grid = c.alpha_r_grid;
  o.jobs = c.jobs;
  return o;
}

ModelFile Model(const Common& c) {
  if (c.model.empty()) {
    throw PecError(ErrorCode::kParse, "--model is required");
  }
  return LoadModel(c.model);
}

std::vector<int> Scenario(const Common& c, const ModelFile& m) {
  if (!c.scenario.empty()) return c.scenario;
  if (m.scenarios.empty()) {
    throw PecError(ErrorCode::kParse, "--scenario is required");
  }
  return m.scenarios.front();
}

// Pi from a residual-set file when given, otherwise solved afresh.
SymMat ResidualPi(const ModelFile& m, const Common& c,
                  const std::string& residual_file, int* status) {
  if (!residual_file.empty()) {
    return ParseResidualSet(ReadFile(residual_file)).Pi;
  }
  const ResidualSetResult rs = RunResidualSet(m, Options(c));
  if (rs.Pe.min_certificate < -kCertTol) *status = 1;
  return rs.Pi;
}

void PrintMatrix(const char* name, const Eigen::MatrixXd& a) {
  const Eigen::IOFormat fmt(6, 0, ", ", "\n", "  [", "]");
  std::cout << name << " =\n" << a.format(fmt) << "\n";
}

int CmdEmit(const Common& c, const std::string& out) {
  const std::string path = out.empty() ? OutPath(c, "quadtank.json") : out;
  SaveModel(ModelFromCase(BuildCase()), path);
  std::cout << "wrote " << path << "\n";
  return 0;
}

int CmdResidual(const Common& c) {
  const ModelFile m = Model(c);
  const ResidualSetResult rs = RunResidualSet(m, Options(c));
  const std::string path = OutPath(c, "residual_set.json");
  WriteFile(path, DumpResidualSet(rs));
  std::cout << std::setprecision(6) << "-log det(Pi) = " << rs.neg_logdet_pi
            << "\n-log det(P_e) = " << rs.neg_logdet_pe
            << "\nalpha_e = " << rs.alpha_e << ", alpha_r = " << rs.alpha_r
            << "\nmin certificate = " << rs.Pe.min_certificate << "\nwrote "
            << path << "\n";
  return rs.Pe.min_certificate >= -kCertTol ? 0 : 1;
}

int CmdErrorSet(const Common& c, const std::string& residual) {
  const ModelFile m = Model(c);
  int status = 0;
  const AttackScenario sc = MakeScenario(m.plant.ny(), Scenario(c, m));
  const SymMat pi = ResidualPi(m, c, residual, &status);
  const EllipsoidCertificate es = RunErrorSet(m, pi, sc, Options(c));
  const std::string path =
      OutPath(c, "error_set_" + FileTag(sc.sensors) + ".json");
  WriteFile(path, DumpCertificate(es));
  std::cout << std::setprecision(6) << "scenario " << SensorLabel(sc.sensors)
            << "\n-log det(P_e_bar) = " << es.objective
            << "\nalpha = " << es.alpha
            << "\nmin certificate = " << es.min_certificate << "\nwrote "
            << path << "\n";
  if (es.min_certificate < -kCertTol) status = 1;
  return status;
}

int CmdSynthesize(const Common& c, const std::string& residual) {
  const ModelFile m = Model(c);
  int status = 0;
  const AttackScenario sc = MakeScenario(m.plant.ny(), Scenario(c, m));
  const SymMat pi = ResidualPi(m, c, residual, &status);
  const ScenarioOutcome so = RunScenario(m, pi, sc.sensors, Options(c));
  const SynthesisResult& r = so.synthesis;
  const std::string path =
      OutPath(c, "realization_" + FileTag(r.sensors) + ".json");
  WriteFile(path, DumpRealization(RealizationFromResult(r, pi)));
  std::cout << std::setprecision(6) << "scenario " << SensorLabel(r.sensors)
            << "\n-log det(P_e_bar) = " << so.error_set.objective
            << "\ntrace base = " << r.trace_base << " (alpha "
            << r.alpha_base << ")\ntrace opt  = " << r.trace_opt
            << " (alpha " << r.alpha << ")\n";
  PrintMatrix("F*", r.F_star);
  std::cout << "wrote " << path << "\n";
  if (!CertificatesHold(so, kCertTol)) status = 1;
  return status;
}

int CmdTable(const Common& c, const std::string& residual) {
  const ModelFile m = Model(c);
  int status = 0;
  const SymMat pi = ResidualPi(m, c, residual, &status);
  const std::vector<ScenarioOutcome> rows = RunTable(m, pi, Options(c));
  const std::string path = OutPath(c, "table2.csv");
  const std::string csv = TableCsv(rows);
  WriteFile(path, csv);
  std::cout << std::setprecision(6);
  for (const ScenarioOutcome& so : rows) {
    std::cout << std::setw(10) << SensorLabel(so.synthesis.sensors)
              << "  -logdet " << std::setw(10) << so.error_set.objective
              << "  base " << std::setw(12) << so.synthesis.trace_base
              << "  opt " << std::setw(12) << so.synthesis.trace_opt << "\n";
    if (!CertificatesHold(so, kCertTol)) status = 1;
  }
  std::cout << "wrote " << path << "\n";
  return status;
}

int CmdSimulate(const Common& c, const SimFlags& f) {
  const ModelFile m = Model(c);
  int status = 0;
  BaseController controller = m.base;
  SymMat pi;
  std::vector<int> sensors = f.attack_sensors;
  if (!f.realization.empty()) {
    const RealizationFile r = ParseRealization(ReadFile(f.realization));
    controller = MakeController(m.plant, r.realized.Ac, r.realized.Bc,
                                r.realized.Cc, r.realized.Dc);
    pi = r.Pi;
    if (sensors.empty()) sensors = r.sensors;
  } else {
    pi = ResidualPi(m, c, f.residual, &status);
  }
  if (sensors.empty()) sensors = Scenario(c, m);

  SimConfig cfg;
  cfg.dt = f.dt;
  cfg.horizon = f.horizon;
  cfg.seed = c.seed;
  cfg.record_every = f.record_every;
  if (f.disturbance == "zero") {
    cfg.disturbance = DisturbanceMode::kZero;
  } else if (f.disturbance == "random") {
    cfg.disturbance = DisturbanceMode::kBoundaryRandom;
  } else {
    throw PecError(ErrorCode::kParse,
                   "--disturbance must be 'zero' or 'random'");
  }
  if (!f.no_attack) {
    StealthyFdi atk;
    atk.sensors = sensors;
    atk.start = f.attack_start;
    atk.amplitude = f.amplitude;
    atk.frequency = f.frequency;
    atk.guard = !f.unguarded;
    cfg.attack = atk;
  }
  const SimTrace tr =
      Simulate(m.plant, controller, m.L, pi, m.bounds, cfg);
  const std::string path = OutPath(c, f.out);
  std::ostringstream os;
  WriteTraceCsv(tr, os);
  WriteFile(path, os.str());
  std::cout << std::setprecision(9) << "max r'Pi r = " << tr.max_stealth
            << "\nalarms = " << tr.alarm_count << "\nwrote " << path << "\n";
  return status;
}

void AddCommon(CLI::App* app, Common* c) {
  app->add_option("--model", c->model, "model file (JSON)");
  app->add_option("--scenario", c->scenario, "attacked sensors, e.g. 1,4")
      ->delimiter(',');
  app->add_option("--alpha-grid", c->alpha_grid, "comma-separated alphas")
      ->delimiter(',');
  app->add_option("--alpha-r-grid", c->alpha_r_grid,
                  "comma-separated residual alphas")
      ->delimiter(',');
  app->add_option("--feas-tol", c->feas_tol, "solver feasibility tolerance");
  app->add_option("--seed", c->seed, "random seed");
  app->add_option("--jobs", c->jobs, "worker threads (0 = all)");
  app->add_option("--out-dir", c->out_dir,
                  "output directory (default $PEC_OUT_DIR or .)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plant-equivalent controller realization toolkit"};
  app.require_subcommand(1);

  Common common;
  SimFlags sim;
  std::string residual;
  std::string emit_out;

  auto* emit = app.add_subcommand("emit-quadtank", "write the case model");
  AddCommon(emit, &common);
  emit->add_option("--out", emit_out, "output file");

  auto* rset = app.add_subcommand("residual-set", "attack-free residual set");
  AddCommon(rset, &common);

  auto* eset = app.add_subcommand("error-set", "detector error set");
  AddCommon(eset, &common);
  eset->add_option("--residual", residual, "residual-set file");

  auto* syn = app.add_subcommand("synthesize", "optimal realization");
  AddCommon(syn, &common);
  syn->add_option("--residual", residual, "residual-set file");

  auto* table = app.add_subcommand("table2", "all case scenarios to CSV");
  AddCommon(table, &common);
  table->add_option("--residual", residual, "residual-set file");

  auto* simc = app.add_subcommand("simulate", "time-domain simulation");
  AddCommon(simc, &common);
  simc->add_option("--realization", sim.realization, "realization file");
  simc->add_option("--residual", sim.residual, "residual-set file");
  simc->add_option("--attack-sensor", sim.attack_sensors, "attacked sensors")
      ->delimiter(',');
  simc->add_option("--attack-start", sim.attack_start, "attack onset [s]");
  simc->add_option("--amplitude", sim.amplitude, "attack amplitude");
  simc->add_option("--frequency", sim.frequency, "attack frequency [rad/s]");
  simc->add_option("--horizon", sim.horizon, "simulated time [s]");
  simc->add_option("--dt", sim.dt, "RK4 step [s]");
  simc->add_option("--disturbance", sim.disturbance, "zero | random");
  simc->add_flag("--unguarded", sim.unguarded,
                 "do not scale the attack to stay stealthy");
  simc->add_flag("--no-attack", sim.no_attack, "attack-free run");
  simc->add_option("--record-every", sim.record_every, "trace decimation");
  simc->add_option("--out", sim.out, "CSV file name inside the output dir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*emit) return CmdEmit(common, emit_out);
    if (*rset) return CmdResidual(common);
    if (*eset) return CmdErrorSet(common, residual);
    if (*syn) return CmdSynthesize(common, residual);
    if (*table) return CmdTable(common, residual);
    if (*simc) return CmdSimulate(common, sim);
  } catch (const PecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::kParse:
      case ErrorCode::kBadIndex:
      case ErrorCode::kDimensionMismatch:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
