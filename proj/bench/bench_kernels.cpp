// Compares the OpenMP kernels against their serial references on
// synthetic coastline scenes of increasing size.

#include <benchmark/benchmark.h>

#include "edgebench/serial.hpp"
#include "edgebench/synth.hpp"

using namespace edgebench;

namespace {

SceneSpec bench_spec(int n) {
    SceneSpec spec;
    spec.width = n;
    spec.height = n;
    spec.seed = 7;
    spec.n_noise_edges = n / 8;
    return spec;
}

GrayImage bench_image(int n) {
    const SceneSpec spec = bench_spec(n);
    return render_band(gen_coastline_mask(spec), spec);
}

BinaryMap bench_edges(int n) {
    return canny(bench_image(n), ThresholdPair(50, 100), 1.0);
}

} // namespace

static void BM_smooth_serial(benchmark::State& state) {
    const GrayImage img = bench_image(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::smooth(img, 1.0));
}
BENCHMARK(BM_smooth_serial)->Arg(256)->Arg(1024);

static void BM_smooth_omp(benchmark::State& state) {
    const GrayImage img = bench_image(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(smooth(img, 1.0));
}
BENCHMARK(BM_smooth_omp)->Arg(256)->Arg(1024);

static void BM_sobel_nms_serial(benchmark::State& state) {
    const RealGrid grid =
        serial::smooth(bench_image(static_cast<int>(state.range(0))), 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            serial::nonmax_suppress(serial::sobel_gradients(grid)));
}
BENCHMARK(BM_sobel_nms_serial)->Arg(256)->Arg(1024);

static void BM_sobel_nms_omp(benchmark::State& state) {
    const RealGrid grid = smooth(bench_image(static_cast<int>(state.range(0))), 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(nonmax_suppress(sobel_gradients(grid)));
}
BENCHMARK(BM_sobel_nms_omp)->Arg(256)->Arg(1024);

static void BM_canny_serial(benchmark::State& state) {
    const GrayImage img = bench_image(static_cast<int>(state.range(0)));
    const ThresholdPair t(50, 100);
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::canny(img, t, 1.0));
}
BENCHMARK(BM_canny_serial)->Arg(256)->Arg(1024);

static void BM_canny_omp(benchmark::State& state) {
    const GrayImage img = bench_image(static_cast<int>(state.range(0)));
    const ThresholdPair t(50, 100);
    for (auto _ : state)
        benchmark::DoNotOptimize(canny(img, t, 1.0));
}
BENCHMARK(BM_canny_omp)->Arg(256)->Arg(1024);

static void BM_distance_transform_serial(benchmark::State& state) {
    const BinaryMap edges = bench_edges(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::distance_transform(edges));
}
BENCHMARK(BM_distance_transform_serial)->Arg(256)->Arg(1024);

static void BM_distance_transform_omp(benchmark::State& state) {
    const BinaryMap edges = bench_edges(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(distance_transform(edges));
}
BENCHMARK(BM_distance_transform_omp)->Arg(256)->Arg(1024);

static void BM_fom_serial(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const BinaryMap detected = bench_edges(n);
    const BinaryMap truth =
        canny(bench_image(n), ThresholdPair(100, 200), 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::fom(detected, truth));
}
BENCHMARK(BM_fom_serial)->Arg(256)->Arg(1024);

static void BM_fom_omp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const BinaryMap detected = bench_edges(n);
    const BinaryMap truth =
        canny(bench_image(n), ThresholdPair(100, 200), 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(fom(detected, truth));
}
BENCHMARK(BM_fom_omp)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
