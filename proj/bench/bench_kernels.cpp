// Serial reference paths against the OpenMP kernels. Arg 0 is serial, 1 parallel.
#include <random>

#include <benchmark/benchmark.h>

#include "rotormesh/generate.hpp"
#include "rotormesh/geometry.hpp"
#include "rotormesh/interface.hpp"
#include "rotormesh/quality.hpp"
#include "rotormesh/rbf.hpp"

using namespace rotormesh;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

const Mesh& desk_mesh() {
  static const Mesh m = generate::blade_in_box(generate::BladeBoxSpec{});
  return m;
}

void BM_CellGeometry(benchmark::State& state) {
  const Mesh& m = desk_mesh();
  for (auto _ : state) benchmark::DoNotOptimize(cell_geometry(m, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m.element_count()));
}

void BM_Orthogonality(benchmark::State& state) {
  const Mesh& m = desk_mesh();
  for (auto _ : state) benchmark::DoNotOptimize(orthogonality_metrics(m, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m.element_count()));
}

void BM_EvaluateField(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vec3> c, d;
  for (int i = 0; i < 256; ++i) {
    c.emplace_back(4 * u(rng), u(rng), 0.1 * u(rng));
    d.push_back(0.01 * Vec3(u(rng), u(rng), u(rng)));
  }
  const auto sol = solve_weights(c, d, RbfKernel(KernelKind::wendland_c2, 1.5), false);
  const auto& targets = desk_mesh().points();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_field(sol, targets, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(targets.size()));
}

void BM_Supermesh(benchmark::State& state) {
  const Mesh m = generate::cylindrical_interface_pair(96, 120, 1.0, 0.5, 0.1, 16);
  const auto pair = interface_face_sets(m, "rotor_outer", "stator_inner");
  for (auto _ : state) benchmark::DoNotOptimize(build_supermesh(pair.a, pair.b, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pair.a.face_count()));
}

}  // namespace

BENCHMARK(BM_CellGeometry)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Orthogonality)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateField)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Supermesh)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
