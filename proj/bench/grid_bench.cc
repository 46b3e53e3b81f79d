// Serial vs OpenMP execution of the two parallel kernels: the alpha grid
// search and the Monte Carlo envelope.

#include <benchmark/benchmark.h>

#include "pec/pipeline.h"
#include "pec/quadtank_case.h"
#include "pec/simulator.h"

namespace pec {
namespace {

struct Fixture {
  QuadTankCase qc = BuildCase();
  TransformedPlant tp = TransformPlant(qc.plant);
  SymMat pi;
  Fixture() {
    RunOptions o;
    o.alpha_grid = LogSpace(1e-2, 1e1, 6);
    o.alpha_r_grid = {0.5};
    pi = RunResidualSet(ModelFromCase(qc), o).Pi;
  }
};

const Fixture& F() {
  static const Fixture f;
  return f;
}

void BM_ErrorSetGrid(benchmark::State& state) {
  const Fixture& f = F();
  const Execution exec =
      state.range(0) ? Execution::kParallel : Execution::kSerial;
  const AttackScenario sc = MakeScenario(4, {1, 4});
  const ResidualDrivenLoop rd = DetectorErrorForm(f.qc.L, f.tp, sc);
  const std::vector<double> grid = LogSpace(1e-2, 1e1, 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        DetectorErrorSetSearch(rd, f.qc.bounds, f.pi, sc, grid, {}, exec));
  }
}
BENCHMARK(BM_ErrorSetGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_Envelope(benchmark::State& state) {
  const Fixture& f = F();
  const Execution exec =
      state.range(0) ? Execution::kParallel : Execution::kSerial;
  const AttackScenario sc = MakeScenario(4, {1});
  const ResidualDrivenLoop rd = DetectorErrorForm(f.qc.L, f.tp, sc);
  const std::vector<InputChannel> ch{{rd.Ge, f.qc.bounds.W_w},
                                     {rd.Lv, f.qc.bounds.W_v},
                                     {rd.Lr, f.pi}};
  const EnvelopeConfig cfg = DefaultEnvelopeConfig(rd.Ae, 200, 1);
  const SymMat p = SymMat::Identity(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(MonteCarloEnvelope(rd.Ae, ch, p, cfg, exec));
  }
}
BENCHMARK(BM_Envelope)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace
}  // namespace pec

BENCHMARK_MAIN();
