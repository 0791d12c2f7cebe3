#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "igasv/blackscholes.hpp"
#include "igasv/calibration.hpp"
#include "igasv/expansion.hpp"
#include "igasv/io.hpp"
#include "igasv/montecarlo.hpp"

using namespace igasv;

namespace {

const std::string kFixtures = IGASV_FIXTURE_DIR;

const ModelFile& aud_params() {
  static const ModelFile m = read_model_file(kFixtures + "/params/audusd_published.json");
  return m;
}

const MarketData& aud_market() {
  static const MarketData md = read_market_data(kFixtures + "/audusd_2014-06-17.json");
  return md;
}

void BM_Greeks(benchmark::State& st) {
  const BsContext ctx(1.02, 0.75, 0.01, 0.015);
  double y = 0.01;
  for (auto _ : st) {
    benchmark::DoNotOptimize(expansion_greeks(ctx, 0.0, y));
    y += 1e-12;
  }
}
BENCHMARK(BM_Greeks);

// coefficients over a schedule with as many intervals as the argument
void BM_Coefficients(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  std::vector<double> grid{0.0};
  std::vector<ModelParams> params;
  for (std::size_t i = 0; i < n; ++i) {
    grid.push_back(0.25 * static_cast<double>(i + 1));
    params.push_back({2.0 + 0.1 * static_cast<double>(i), 0.1, 0.8, -0.4});
  }
  const ParamSchedule s(TimeGrid(grid), params);
  for (auto _ : st) benchmark::DoNotOptimize(coefficients(s, 0.1, grid.back()));
}
BENCHMARK(BM_Coefficients)->Arg(1)->Arg(4)->Arg(12);

void BM_ExpansionSurface(benchmark::State& st) {
  const ModelFile& m = aud_params();
  const MarketData& md = aud_market();
  for (auto _ : st) {
    benchmark::DoNotOptimize(evaluate_fit(md.surface, m.v0, m.schedule));
  }
}
BENCHMARK(BM_ExpansionSurface)->Unit(benchmark::kMicrosecond);

void BM_VolStep(benchmark::State& st) {
  double v = 0.1;
  double dB = 0.01;
  for (auto _ : st) {
    v = step_vol(v, 2.0, 0.1, 0.8, 1.0 / 2920.0, dB);
    dB = -dB;
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_VolStep);

void BM_MonteCarloPut(benchmark::State& st) {
  const ModelFile& m = aud_params();
  const BsContext ctx(0.93, 0.5, m.domestic_curve().integral(0.0, 0.5), m.foreign_curve().integral(0.0, 0.5));
  McConfig cfg;
  cfg.paths = static_cast<std::size_t>(st.range(0));
  cfg.steps_per_year = 2000.0;
  cfg.threads = 1;
  for (auto _ : st) benchmark::DoNotOptimize(mc_price_put(ModelState(m.spot, m.v0), m.schedule, ctx, cfg));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_MonteCarloPut)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_CalibrateSurface(benchmark::State& st) {
  const MarketData& md = aud_market();
  for (auto _ : st) benchmark::DoNotOptimize(calibrate(md.surface));
}
BENCHMARK(BM_CalibrateSurface)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
