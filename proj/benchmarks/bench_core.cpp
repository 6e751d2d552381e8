#include <benchmark/benchmark.h>

#include "dprir/diffusion.hpp"
#include "dprir/fidelity.hpp"
#include "dprir/metrics.hpp"
#include "dprir/projector.hpp"
#include "dprir/score.hpp"
#include "dprir/tv.hpp"

namespace bm = benchmark;
using namespace dprir;

static void BM_ForwardProject(bm::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FanBeamProjector op(FanBeamGeometry::desk(n, 360));
  const ImageGrid img = make_shepp_logan(n, op.pixel_size());
  for (auto _ : state) bm::DoNotOptimize(forward_project(img, op));
}

static void BM_BackProject(bm::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FanBeamProjector op(FanBeamGeometry::desk(n, 360));
  const Sinogram s = forward_project(make_shepp_logan(n, op.pixel_size()), op);
  for (auto _ : state) bm::DoNotOptimize(back_project(s, op));
}

static void BM_OsSartPass(bm::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FanBeamProjector op(FanBeamGeometry::desk(n, 96));
  const Sinogram y = forward_project(make_shepp_logan(n, op.pixel_size()), op);
  const OsSart sart(op, SartConfig{24, 1.0, 1, true});
  ImageGrid x(n, n, op.pixel_size());
  for (auto _ : state) {
    sart.sweep(x, y);
    bm::ClobberMemory();
  }
}

static void BM_TvProx(bm::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ImageGrid img = make_shepp_logan(n, 1.0, 1.0);
  for (auto _ : state) bm::DoNotOptimize(tv_denoise(img, 0.05, 50));
}

static void BM_Ssim(bm::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ImageGrid a = make_shepp_logan(n, 1.0, 1.0);
  const ImageGrid b = make_phantom_ensemble(n, 1.0, 1, 3, 1.0).front();
  for (auto _ : state) bm::DoNotOptimize(ssim(a, b, 2.0));
}

static void BM_GaussianPredict(bm::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ImageGrid m = make_shepp_logan(n, 1.0, 1.0);
  const GaussianAnalyticModel model(m, std::vector<double>(m.size(), 0.1));
  const auto sched = make_linear_schedule(200, 5e-4, 0.1);
  for (auto _ : state) bm::DoNotOptimize(model.predict(m, 100, sched));
}

BENCHMARK(BM_ForwardProject)->Arg(64)->Arg(128)->Unit(bm::kMillisecond);
BENCHMARK(BM_BackProject)->Arg(64)->Arg(128)->Unit(bm::kMillisecond);
BENCHMARK(BM_OsSartPass)->Arg(64)->Arg(128)->Unit(bm::kMillisecond);
BENCHMARK(BM_TvProx)->Arg(64)->Arg(128)->Unit(bm::kMillisecond);
BENCHMARK(BM_Ssim)->Arg(128)->Arg(256)->Unit(bm::kMillisecond);
BENCHMARK(BM_GaussianPredict)->Arg(128)->Unit(bm::kMicrosecond);

BENCHMARK_MAIN();
