#include <benchmark/benchmark.h>

#include "winfree/certify.hpp"
#include "winfree/cli.hpp"
#include "winfree/flow.hpp"
#include "winfree/parallel.hpp"

using namespace winfree;

namespace {

const PeriodicFunction kP = ModelSpec::default_pulse();
const PeriodicFunction kR = ModelSpec::default_response();

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_SupNorm(benchmark::State& state) {
  const PeriodicFunction f = delta_coefficient(kP, kR, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(sup_norm(f, 1, {}, exec_of(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_SupNorm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MapIndexedCertify(benchmark::State& state) {
  const std::size_t cells = 16;
  for (auto _ : state) {
    auto r = map_indexed<bool>(
        cells,
        [&](std::size_t i) {
          const double g = 1e-7 * std::pow(10.0, static_cast<double>(i % 4));
          const double k = 0.02 * static_cast<double>(1 + i / 4);
          return std::holds_alternative<ParameterCertificate>(certify_parameters(g, k, kP, kR));
        },
        exec_of(state));
    benchmark::DoNotOptimize(r);
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_MapIndexedCertify)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EnsembleInvariance(benchmark::State& state) {
  const auto cert = std::get<ParameterCertificate>(certify_parameters(1e-5, 0.1, kP, kR));
  const std::size_t draws = 8, n = 10;
  for (auto _ : state) {
    auto r = map_indexed<double>(
        draws,
        [&](std::size_t k) {
          const cli::Instance inst = cli::draw_instance(cert, kP, kR, n, 1, k);
          return check_set_invariance(inst.model, cert, inst.x0, 10 * kTwoPi, 1e-3, 10).min_slack;
        },
        exec_of(state));
    benchmark::DoNotOptimize(r);
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_EnsembleInvariance)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
