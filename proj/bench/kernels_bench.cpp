// Serial reference vs OpenMP versions of the per-frame kernels. Set
// OMP_NUM_THREADS to compare thread counts.

#include <chrono>
#include <memory>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sahitrack/kernels.hpp"
#include "sahitrack/sim.hpp"
#include "sahitrack/slicing.hpp"

using namespace sahitrack;

namespace {

struct BoxSet {
  std::vector<BBox> predicted, history, dets;
};

BoxSet make_boxes(int n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> x(0, 4086), y(0, 2028);
  BoxSet s;
  for (int i = 0; i < n; ++i) {
    s.predicted.emplace_back(x(rng), y(rng), 10, 20);
    s.history.emplace_back(x(rng), y(rng), 10, 20);
    s.dets.emplace_back(x(rng), y(rng), 10, 20);
  }
  return s;
}

std::vector<Embedding> make_features(int n, int dim) {
  std::mt19937_64 rng(2);
  const IdentityEmbedder emb(dim, 3);
  std::vector<Embedding> out;
  for (int i = 0; i < n; ++i) out.push_back(emb.random_unit(rng));
  return out;
}

template <bool Parallel>
void BM_DhDiou(benchmark::State& state) {
  const BoxSet s = make_boxes(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto m = Parallel ? kernels::dh_diou_matrix_parallel(s.predicted, s.history, s.dets, 0.2, 0.8)
                      : kernels::dh_diou_matrix_serial(s.predicted, s.history, s.dets, 0.2, 0.8);
    benchmark::DoNotOptimize(m.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <bool Parallel>
void BM_Cosine(benchmark::State& state) {
  const auto t = make_features(static_cast<int>(state.range(0)), 128);
  const auto d = make_features(static_cast<int>(state.range(0)), 128);
  for (auto _ : state) {
    auto m = Parallel ? kernels::cosine_matrix_parallel(t, d) : kernels::cosine_matrix_serial(t, d);
    benchmark::DoNotOptimize(m.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

// Full-grid inference with a detector that blocks for range(0) microseconds
// per region.
template <bool Parallel>
void BM_DetectRegions(benchmark::State& state) {
  const SliceGrid grid = build_grid(4096, 2048, 256, 128, 0.25);
  ScenarioConfig scene;
  scene.n_frames = 1;
  const Scene s = generate_scene(scene);
  auto inner = std::make_shared<PrecomputedDetector>(oracle_detections(s.ground_truth, 1, NoiseConfig{}, scene));
  const DelayedDetector port(inner, std::chrono::microseconds(state.range(0)));
  for (auto _ : state) {
    auto dets = Parallel ? kernels::detect_regions_parallel(port, grid.regions(), 1)
                         : kernels::detect_regions_serial(port, grid.regions(), 1);
    benchmark::DoNotOptimize(dets.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

}  // namespace

BENCHMARK(BM_DhDiou<false>)->Name("dh_diou/serial")->Arg(16)->Arg(128)->Arg(512);
BENCHMARK(BM_DhDiou<true>)->Name("dh_diou/parallel")->Arg(16)->Arg(128)->Arg(512);
BENCHMARK(BM_Cosine<false>)->Name("cosine/serial")->Arg(16)->Arg(128)->Arg(512);
BENCHMARK(BM_Cosine<true>)->Name("cosine/parallel")->Arg(16)->Arg(128)->Arg(512);
BENCHMARK(BM_DetectRegions<false>)->Name("detect_regions/serial")->Arg(0)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetectRegions<true>)->Name("detect_regions/parallel")->Arg(0)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
