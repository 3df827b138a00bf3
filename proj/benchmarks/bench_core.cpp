#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "okdmd/dynamics.hpp"
#include "okdmd/estimators.hpp"
#include "okdmd/gram.hpp"
#include "okdmd/pinv.hpp"
#include "okdmd/sweep.hpp"

namespace {

using namespace okdmd;

std::vector<Trajectory> square_dataset(int side) {
  DatasetSpec spec;
  spec.system = duffing_system();
  spec.grid_min = Eigen::Vector2d(-3.0, -3.0);
  spec.grid_max = Eigen::Vector2d(3.0, 3.0);
  spec.grid_counts = {side, side};
  return generate_dataset(spec);
}

void bm_kernel_eval(benchmark::State& state) {
  const KernelParams params{5.0};
  const Eigen::VectorXd x = Eigen::Vector2d(0.3, -1.1);
  const Eigen::VectorXd y = Eigen::Vector2d(-0.7, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(eval_kernel(params, x, y));
}
BENCHMARK(bm_kernel_eval);

void bm_occupation_inner(benchmark::State& state) {
  const auto trajs = square_dataset(2);
  const KernelParams params{5.0};
  const QuadratureSpec quad;
  for (auto _ : state)
    benchmark::DoNotOptimize(occupation_inner(trajs[0], trajs[1], params, quad));
}
BENCHMARK(bm_occupation_inner);

void bm_gram_occupation(benchmark::State& state) {
  const auto trajs = square_dataset(static_cast<int>(state.range(0)));
  const KernelParams params{5.0};
  const QuadratureSpec quad;
  for (auto _ : state) benchmark::DoNotOptimize(gram_occupation(trajs, params, quad));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(bm_gram_occupation)->Arg(4)->Arg(8)->Arg(13)->Complexity();

void bm_pinv(benchmark::State& state) {
  const auto trajs = square_dataset(static_cast<int>(state.range(0)));
  const KernelParams params{5.0};
  const Eigen::MatrixXd G = gram_occupation(trajs, params, QuadratureSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(pinv_svd(G));
}
BENCHMARK(bm_pinv)->Arg(8)->Arg(13);

void bm_fit_okr(benchmark::State& state) {
  const auto trajs = square_dataset(13);
  const KernelParams params{5.0};
  const GramPack pack = build_gram_pack(trajs, params, params, QuadratureSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(fit_okr(pack, 1e-6));
}
BENCHMARK(bm_fit_okr);

void bm_feature_matrix(benchmark::State& state) {
  const auto trajs = square_dataset(13);
  const KernelParams params{5.0};
  EvalGrid grid;
  grid.min = Eigen::Vector2d(-3.0, -3.0);
  grid.max = Eigen::Vector2d(3.0, 3.0);
  grid.counts = {61, 61};
  const Eigen::MatrixXd points = grid_points(grid);
  for (auto _ : state)
    benchmark::DoNotOptimize(occupation_feature_matrix(trajs, points, params, QuadratureSpec{}));
}
BENCHMARK(bm_feature_matrix);

}  // namespace

BENCHMARK_MAIN();
