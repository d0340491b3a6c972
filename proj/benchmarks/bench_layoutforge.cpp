// Microbenchmarks for the hot paths: wire generation, via generation, rule
// checking, stream encoding and the block transform. Cell sizes are the
// benchmark argument in nm per side.
#include <benchmark/benchmark.h>

#include <vector>

#include "layoutforge/drc.hpp"
#include "layoutforge/features.hpp"
#include "layoutforge/gdsii.hpp"
#include "layoutforge/metal.hpp"
#include "layoutforge/prng.hpp"
#include "layoutforge/raster.hpp"
#include "layoutforge/via.hpp"

using namespace layoutforge;

namespace {

MetalSpec dense_metal(DbUnit size) {
  MetalSpec spec;
  spec.wire_cd = 16;
  spec.track_pitch = 32;
  spec.min_t2t = 12;
  spec.max_t2t = 200;
  spec.min_length = 44;
  spec.max_length = 100;
  spec.t2t_grid = 5;
  spec.total_x = size;
  spec.total_y = size;
  spec.seed = 1;
  return spec;
}

ViaSpec via_stack(DbUnit size) {
  ViaSpec spec;
  spec.via_x = spec.via_y = 70;
  spec.enc_x = spec.enc_y = 20;
  spec.pitch_x = spec.pitch_y = 140;
  spec.fraction = 0.5;
  spec.seed = 1;
  for (MetalSpec* m : {&spec.m1, &spec.m2}) {
    m->wire_cd = 70;
    m->track_pitch = 140;
    m->min_t2t = 50;
    m->max_t2t = 300;
    m->min_length = 100;
    m->max_length = 600;
    m->t2t_grid = 10;
    m->total_x = m->total_y = size;
  }
  spec.m1.orientation = Orientation::kHorizontal;
  spec.m2.orientation = Orientation::kVertical;
  spec.m1.layer = 1;
  spec.m2.layer = 2;
  spec.m1.seed = 11;
  spec.m2.seed = 22;
  return spec;
}

double area_um2(DbUnit size) {
  return um_from_nm(size) * um_from_nm(size);
}

void BM_wire_cell(benchmark::State& state) {
  const MetalSpec spec = dense_metal(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(draw_wire_cell(spec, 1));
  }
  state.counters["um2_per_s"] = benchmark::Counter(
      area_um2(state.range(0)) * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate);
}
BENCHMARK(BM_wire_cell)->Arg(2000)->Arg(5000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_via_cell(benchmark::State& state) {
  const ViaSpec spec = via_stack(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_via_cell(spec));
  }
  state.counters["um2_per_s"] = benchmark::Counter(
      area_um2(state.range(0)) * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate);
}
BENCHMARK(BM_via_cell)->Arg(2000)->Arg(5000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_check_metal(benchmark::State& state) {
  const MetalSpec spec = dense_metal(state.range(0));
  const Cell cell = draw_wire_cell(spec, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_metal(cell, spec));
  }
  state.counters["shapes_per_s"] = benchmark::Counter(
      static_cast<double>(cell.shapes.size()) *
          static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate);
}
BENCHMARK(BM_check_metal)->Arg(5000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_encode_gds(benchmark::State& state) {
  const MetalSpec spec = dense_metal(state.range(0));
  const GdsLibrary lib{"BENCH", {draw_wire_cell(spec, 1)}, {}};
  std::size_t bytes = 0;
  for (auto _ : state) {
    const auto encoded = encode_gds(lib);
    bytes = encoded.size();
    benchmark::DoNotOptimize(encoded.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes) * state.iterations());
}
BENCHMARK(BM_encode_gds)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_real8_roundtrip(benchmark::State& state) {
  double value = 0.001;
  for (auto _ : state) {
    const auto bytes = encode_real8(value);
    benchmark::DoNotOptimize(decode_real8(bytes));
    value += 1e-6;
  }
}
BENCHMARK(BM_real8_roundtrip);

void BM_dct2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Prng rng(3);
  std::vector<double> block(n * n);
  for (double& v : block) v = rng.next_unit();
  for (auto _ : state) {
    benchmark::DoNotOptimize(dct2(block, n));
  }
}
BENCHMARK(BM_dct2)->Arg(8)->Arg(10)->Arg(16);

void BM_rasterize(benchmark::State& state) {
  const MetalSpec spec = dense_metal(2000);
  const Cell cell = draw_wire_cell(spec, 1);
  const Rect window{0, 0, 1200, 1200};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rasterize_clip(cell, window, 10));
  }
}
BENCHMARK(BM_rasterize);

}  // namespace

BENCHMARK_MAIN();
