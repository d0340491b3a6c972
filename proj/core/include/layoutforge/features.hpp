#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "layoutforge/raster.hpp"

namespace layoutforge {

// Orthonormal type-II 2-D DCT over an n*n block, row-major in and out.
std::vector<double> dct2(const std::vector<double>& block, std::size_t n);
std::vector<double> idct2(const std::vector<double>& coeffs, std::size_t n);

// Diagonal scan: diagonals in ascending r+c, even diagonals walked from the
// bottom-left end up to the top-right, odd ones the other way.
std::vector<std::pair<std::size_t, std::size_t>> zigzag_order(std::size_t n);
std::vector<double> zigzag_flatten(const std::vector<double>& block, std::size_t n,
                                   std::size_t keep);
std::vector<double> zigzag_unflatten(const std::vector<double>& coeffs, std::size_t n);

// Per clip: blocks*blocks sub-blocks, DCT each, keep the first `keep` zigzag
// coefficients. Values are indexed [block_row][block_col][k].
struct FeatureTensor {
  std::size_t blocks = 0;
  std::size_t keep = 0;
  std::vector<double> values;

  double at(std::size_t br, std::size_t bc, std::size_t k) const {
    return values[(br * blocks + bc) * keep + k];
  }

  friend bool operator==(const FeatureTensor&, const FeatureTensor&) = default;
};

FeatureTensor feature_tensor(const RasterClip& clip, std::size_t blocks,
                             std::size_t keep);

// Exact inverse when keep == block_px^2; pixels round back to {0,1}.
RasterClip reconstruct_clip(const FeatureTensor& tensor, std::size_t block_px);

// Flat little-endian file: three int32 (blocks, blocks, keep) then the
// float64 values in index order.
void write_tensor(const std::filesystem::path& path, const FeatureTensor& tensor);
FeatureTensor read_tensor(const std::filesystem::path& path);

// Mean pixel value over the Bresenham circle of radius r (pixels) centered at
// (width/2, height/2), for r = 1..r_max. Points off the clip are skipped.
std::vector<double> ccas_sample(const RasterClip& clip, std::size_t r_max);

// Equal-width bins over [0, 1].
std::vector<int> discretize(const std::vector<double>& unit_values, int bins);

// Empirical mutual information in nats over two categorical vectors.
double mutual_information(const std::vector<int>& c, const std::vector<int>& y);

enum class SelectDirection { kMaximize, kMinimize };

struct CircleSelectConfig {
  std::size_t count = 0;    // circles to keep
  std::size_t spacing = 0;  // chosen indices must differ by more than this
  int bins = 16;
  SelectDirection direction = SelectDirection::kMaximize;
};

// Greedy pick by mutual information between each circle's density and the
// label, ties to the lower index. `samples[clip][circle]` holds the ccas
// densities. Returns ascending 1-based circle indices.
std::vector<std::size_t> select_circles(const std::vector<std::vector<double>>& samples,
                                        const std::vector<int>& labels,
                                        const CircleSelectConfig& cfg);

}  // namespace layoutforge
