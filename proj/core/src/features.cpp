#include "layoutforge/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

namespace layoutforge {

namespace {

// Basis matrix C with C[k][i] = a(k) cos(pi (2i+1) k / 2n); dct = C x Ct.
std::vector<double> dct_basis(std::size_t n) {
  std::vector<double> c(n * n);
  const double norm0 = std::sqrt(1.0 / static_cast<double>(n));
  const double norm = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double angle = std::numbers::pi * (2.0 * i + 1.0) * k / (2.0 * n);
      c[k * n + i] = (k == 0 ? norm0 : norm) * std::cos(angle);
    }
  }
  return c;
}

// out = a * b with optional transposes, all n*n row-major.
std::vector<double> matmul(const std::vector<double>& a, bool ta,
                           const std::vector<double>& b, bool tb, std::size_t n) {
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double av = ta ? a[k * n + i] : a[i * n + k];
        const double bv = tb ? b[j * n + k] : b[k * n + j];
        acc += av * bv;
      }
      out[i * n + j] = acc;
    }
  }
  return out;
}

}  // namespace

std::vector<double> dct2(const std::vector<double>& block, std::size_t n) {
  if (block.size() != n * n) throw std::invalid_argument("dct2: block size mismatch");
  const auto c = dct_basis(n);
  return matmul(matmul(c, false, block, false, n), false, c, true, n);
}

std::vector<double> idct2(const std::vector<double>& coeffs, std::size_t n) {
  if (coeffs.size() != n * n) throw std::invalid_argument("idct2: block size mismatch");
  const auto c = dct_basis(n);
  return matmul(matmul(c, true, coeffs, false, n), false, c, false, n);
}

std::vector<std::pair<std::size_t, std::size_t>> zigzag_order(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> order;
  order.reserve(n * n);
  for (std::size_t s = 0; s + 1 <= 2 * n - 1; ++s) {
    const std::size_t r_hi = std::min(s, n - 1);       // bottom-left end
    const std::size_t r_lo = s >= n ? s - (n - 1) : 0;  // top-right end
    if (s % 2 == 0) {
      for (std::size_t r = r_hi + 1; r-- > r_lo;) order.emplace_back(r, s - r);
    } else {
      for (std::size_t r = r_lo; r <= r_hi; ++r) order.emplace_back(r, s - r);
    }
  }
  return order;
}

std::vector<double> zigzag_flatten(const std::vector<double>& block, std::size_t n,
                                   std::size_t keep) {
  if (block.size() != n * n) throw std::invalid_argument("zigzag: block size mismatch");
  if (keep > n * n) throw std::invalid_argument("zigzag: keep exceeds block");
  const auto order = zigzag_order(n);
  std::vector<double> out;
  out.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) {
    out.push_back(block[order[k].first * n + order[k].second]);
  }
  return out;
}

std::vector<double> zigzag_unflatten(const std::vector<double>& coeffs, std::size_t n) {
  if (coeffs.size() > n * n) throw std::invalid_argument("zigzag: too many coefficients");
  const auto order = zigzag_order(n);
  std::vector<double> block(n * n, 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    block[order[k].first * n + order[k].second] = coeffs[k];
  }
  return block;
}

FeatureTensor feature_tensor(const RasterClip& clip, std::size_t blocks,
                             std::size_t keep) {
  if (blocks == 0) throw std::invalid_argument("feature_tensor: blocks must be positive");
  if (clip.width != clip.height || clip.width % blocks != 0) {
    throw std::invalid_argument("feature_tensor: clip does not split into blocks");
  }
  const std::size_t px = clip.width / blocks;
  if (keep == 0 || keep > px * px) {
    throw std::invalid_argument("feature_tensor: keep out of range");
  }

  FeatureTensor tensor{blocks, keep, {}};
  tensor.values.reserve(blocks * blocks * keep);
  std::vector<double> block(px * px);
  for (std::size_t br = 0; br < blocks; ++br) {
    for (std::size_t bc = 0; bc < blocks; ++bc) {
      for (std::size_t r = 0; r < px; ++r) {
        for (std::size_t c = 0; c < px; ++c) {
          block[r * px + c] = clip.at(br * px + r, bc * px + c);
        }
      }
      const auto flat = zigzag_flatten(dct2(block, px), px, keep);
      tensor.values.insert(tensor.values.end(), flat.begin(), flat.end());
    }
  }
  return tensor;
}

RasterClip reconstruct_clip(const FeatureTensor& tensor, std::size_t block_px) {
  if (tensor.keep != block_px * block_px) {
    throw std::invalid_argument("reconstruct_clip: tensor is lossy (keep < block size)");
  }
  RasterClip clip;
  clip.width = clip.height = tensor.blocks * block_px;
  clip.pixels.assign(clip.width * clip.height, 0);
  for (std::size_t br = 0; br < tensor.blocks; ++br) {
    for (std::size_t bc = 0; bc < tensor.blocks; ++bc) {
      const std::size_t base = (br * tensor.blocks + bc) * tensor.keep;
      const std::vector<double> coeffs(tensor.values.begin() + static_cast<std::ptrdiff_t>(base),
                                       tensor.values.begin() +
                                           static_cast<std::ptrdiff_t>(base + tensor.keep));
      const auto block = idct2(zigzag_unflatten(coeffs, block_px), block_px);
      for (std::size_t r = 0; r < block_px; ++r) {
        for (std::size_t c = 0; c < block_px; ++c) {
          clip.set(br * block_px + r, bc * block_px + c,
                   block[r * block_px + c] >= 0.5 ? 1 : 0);
        }
      }
    }
  }
  return clip;
}

void write_tensor(const std::filesystem::path& path, const FeatureTensor& tensor) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const std::int32_t header[3] = {static_cast<std::int32_t>(tensor.blocks),
                                  static_cast<std::int32_t>(tensor.blocks),
                                  static_cast<std::int32_t>(tensor.keep)};
  os.write(reinterpret_cast<const char*>(header), sizeof(header));
  os.write(reinterpret_cast<const char*>(tensor.values.data()),
           static_cast<std::streamsize>(tensor.values.size() * sizeof(double)));
  if (!os) throw std::runtime_error("short write to " + path.string());
}

FeatureTensor read_tensor(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::int32_t header[3];
  is.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!is || header[0] != header[1] || header[0] <= 0 || header[2] <= 0) {
    throw std::runtime_error("malformed tensor header in " + path.string());
  }
  FeatureTensor tensor{static_cast<std::size_t>(header[0]),
                       static_cast<std::size_t>(header[2]), {}};
  tensor.values.resize(tensor.blocks * tensor.blocks * tensor.keep);
  is.read(reinterpret_cast<char*>(tensor.values.data()),
          static_cast<std::streamsize>(tensor.values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("truncated tensor file " + path.string());
  return tensor;
}

std::vector<double> ccas_sample(const RasterClip& clip, std::size_t r_max) {
  if (r_max > std::min(clip.width, clip.height) / 2) {
    throw std::invalid_argument("ccas_sample: r_max exceeds half the clip");
  }
  const std::int64_t cx = static_cast<std::int64_t>(clip.width) / 2;
  const std::int64_t cy = static_cast<std::int64_t>(clip.height) / 2;

  std::vector<double> densities;
  densities.reserve(r_max);
  for (std::size_t radius = 1; radius <= r_max; ++radius) {
    // Midpoint circle; the set removes the octant-seam duplicates.
    std::set<std::pair<std::int64_t, std::int64_t>> ring;
    std::int64_t x = static_cast<std::int64_t>(radius);
    std::int64_t y = 0;
    std::int64_t err = 1 - x;
    while (x >= y) {
      ring.insert({cx + x, cy + y});
      ring.insert({cx - x, cy + y});
      ring.insert({cx + x, cy - y});
      ring.insert({cx - x, cy - y});
      ring.insert({cx + y, cy + x});
      ring.insert({cx - y, cy + x});
      ring.insert({cx + y, cy - x});
      ring.insert({cx - y, cy - x});
      ++y;
      if (err < 0) {
        err += 2 * y + 1;
      } else {
        --x;
        err += 2 * (y - x) + 1;
      }
    }
    std::int64_t on = 0, total = 0;
    for (const auto& [px, py] : ring) {
      if (px < 0 || py < 0 || px >= static_cast<std::int64_t>(clip.width) ||
          py >= static_cast<std::int64_t>(clip.height)) {
        continue;
      }
      ++total;
      on += clip.at(static_cast<std::size_t>(py), static_cast<std::size_t>(px));
    }
    densities.push_back(total == 0 ? 0.0 : static_cast<double>(on) /
                                               static_cast<double>(total));
  }
  return densities;
}

std::vector<int> discretize(const std::vector<double>& unit_values, int bins) {
  if (bins < 1) throw std::invalid_argument("discretize: bins must be positive");
  std::vector<int> out;
  out.reserve(unit_values.size());
  for (double v : unit_values) {
    const int b = static_cast<int>(std::floor(v * bins));
    out.push_back(std::clamp(b, 0, bins - 1));
  }
  return out;
}

double mutual_information(const std::vector<int>& c, const std::vector<int>& y) {
  if (c.size() != y.size()) throw std::invalid_argument("mutual_information: size mismatch");
  if (c.empty()) throw std::invalid_argument("mutual_information: empty input");

  std::map<int, std::int64_t> nc, ny;
  std::map<std::pair<int, int>, std::int64_t> ncy;
  for (std::size_t i = 0; i < c.size(); ++i) {
    ++nc[c[i]];
    ++ny[y[i]];
    ++ncy[{c[i], y[i]}];
  }
  const double n = static_cast<double>(c.size());
  double mi = 0.0;
  for (const auto& [key, cnt] : ncy) {
    const double p = static_cast<double>(cnt) / n;
    const double pc = static_cast<double>(nc[key.first]) / n;
    const double py = static_cast<double>(ny[key.second]) / n;
    mi += p * std::log(p / (pc * py));
  }
  return std::max(0.0, mi);
}

std::vector<std::size_t> select_circles(const std::vector<std::vector<double>>& samples,
                                        const std::vector<int>& labels,
                                        const CircleSelectConfig& cfg) {
  if (samples.empty()) throw std::invalid_argument("select_circles: no samples");
  if (samples.size() != labels.size()) {
    throw std::invalid_argument("select_circles: sample/label size mismatch");
  }
  const std::size_t r_max = samples.front().size();
  for (const auto& row : samples) {
    if (row.size() != r_max) {
      throw std::invalid_argument("select_circles: ragged sample matrix");
    }
  }
  if (cfg.count == 0 || cfg.count > r_max) {
    throw std::invalid_argument("select_circles: count out of range");
  }
  // Tightest packing puts picks (spacing + 1) apart, so the span must fit.
  if ((cfg.count - 1) * (cfg.spacing + 1) + 1 > r_max) {
    throw std::invalid_argument("select_circles: spacing constraint is infeasible");
  }

  std::vector<double> mi(r_max);
  std::vector<double> column(samples.size());
  for (std::size_t i = 0; i < r_max; ++i) {
    for (std::size_t s = 0; s < samples.size(); ++s) column[s] = samples[s][i];
    mi[i] = mutual_information(discretize(column, cfg.bins), labels);
  }

  std::vector<std::size_t> rank(r_max);
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    if (mi[a] != mi[b]) {
      return cfg.direction == SelectDirection::kMaximize ? mi[a] > mi[b] : mi[a] < mi[b];
    }
    return a < b;
  });

  std::vector<std::size_t> chosen;  // 1-based circle indices
  for (std::size_t idx : rank) {
    if (chosen.size() == cfg.count) break;
    const std::size_t circle = idx + 1;
    const bool blocked = std::any_of(chosen.begin(), chosen.end(), [&](std::size_t c) {
      const std::size_t gap = c > circle ? c - circle : circle - c;
      return gap <= cfg.spacing;
    });
    if (!blocked) chosen.push_back(circle);
  }
  if (chosen.size() < cfg.count) {
    throw std::invalid_argument(
        "select_circles: greedy order cannot satisfy the spacing constraint");
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace layoutforge
