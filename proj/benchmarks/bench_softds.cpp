#include <softds/sim.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

namespace {

using namespace softds;

Vector vec(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

Model headon(std::size_t n_obstacles) {
  Model m;
  m.scene.ds = LinearDS{-Matrix::Identity(2, 2), vec(0, 0)};
  for (std::size_t i = 0; i < n_obstacles; ++i) {
    const double y = 3.0 * static_cast<double>(i) - 1.5 * static_cast<double>(n_obstacles - 1);
    m.scene.obstacles.push_back(
        with_stiffness(make_obstacle(vec(4, y), vec(1, 0.7), 1.0, std::numbers::pi / 2), std::exp(0.5)));
  }
  m.scene.strategy.c = 0.3;
  m.scene.strategy.gate_center = vec(0, 0);
  m.scene.strategy.gate_radius = 0.01;
  m.scene.strategy.intersection_pairs = discover_intersection_pairs(m.scene.obstacles);
  return m;
}

void BM_ModulationMatrix(benchmark::State& state) {
  const Obstacle obs = make_obstacle(vec(1, 1), vec(1, 0.5), 2.0, 0.4);
  const Vector x = vec(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(modulation_matrix(obs, x));
}
BENCHMARK(BM_ModulationMatrix);

void BM_TotalVelocity(benchmark::State& state) {
  const Model m = headon(static_cast<std::size_t>(state.range(0)));
  const Vector x = vec(6, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(total_velocity(m.scene, x));
}
BENCHMARK(BM_TotalVelocity)->Arg(1)->Arg(3)->Arg(8);

void BM_Integrate(benchmark::State& state) {
  const Model m = headon(1);
  IntegrationSettings s;
  s.keep_samples = false;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(m, vec(7, 0.4), s));
}
BENCHMARK(BM_Integrate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
