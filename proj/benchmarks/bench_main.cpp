#include <benchmark/benchmark.h>

#include "zqft/dnglue.hpp"
#include "zqft/feyngraph.hpp"
#include "zqft/pertpart.hpp"
#include "zqft/zetareg.hpp"

using namespace zqft;

static void BM_LogDetSphere(benchmark::State& st) {
  const Geometry g = Geometry::sphere(1.0);
  for (auto _ : st) benchmark::DoNotOptimize(zeta::log_det_closed(g, 0.8));
}
BENCHMARK(BM_LogDetSphere);

static void BM_LogDetMellinTorus(benchmark::State& st) {
  const Geometry g = Geometry::torus(1.0, 1.3);
  for (auto _ : st) benchmark::DoNotOptimize(zeta::log_det_mellin(g, 0.8));
}
BENCHMARK(BM_LogDetMellinTorus);

static void BM_TadpoleHemisphere(benchmark::State& st) {
  const Geometry g = Geometry::hemisphere(1.0);
  for (auto _ : st) benchmark::DoNotOptimize(zeta::tau_reg_closed(g, 0.8, {0.6, 0.2}));
}
BENCHMARK(BM_TadpoleHemisphere);

static void BM_BfkCylinder(benchmark::State& st) {
  const auto gl = dn::Gluing::make(Geometry::cylinder(6.283185307179586, 0.6), Geometry::cylinder(6.283185307179586, 0.9));
  for (auto _ : st) benchmark::DoNotOptimize(dn::bfk_residual(gl, 0.8, int(st.range(0))).residual);
}
BENCHMARK(BM_BfkCylinder)->Arg(32)->Arg(64)->Arg(128);

static void BM_EnumerateGraphs(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(graph::enumerate_graphs(int(st.range(0)), {3, 4}, 0, 0).size());
}
BENCHMARK(BM_EnumerateGraphs)->Arg(8)->Arg(10)->Arg(12);

static void BM_PartitionInterval(benchmark::State& st) {
  const auto pot = pert::Potential::parse("p3=1,p4=-0.5", 3 * int(st.range(0)) + 2);
  const Geometry g = Geometry::interval(1.0);
  const auto tau = pert::TadpoleField::local(g, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(pert::partition_function(g, 1.0, pot, tau, int(st.range(0))).scale);
}
BENCHMARK(BM_PartitionInterval)->Arg(2)->Arg(3);
BENCHMARK_MAIN();
