#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "doctest.h"
#include "layoutforge/features.hpp"
#include "layoutforge/prng.hpp"

using namespace layoutforge;

namespace {

std::vector<double> random_block(std::size_t n, Prng& rng) {
  std::vector<double> block(n * n);
  for (double& v : block) v = rng.next_unit();
  return block;
}

RasterClip blank(std::size_t w, std::size_t h) {
  return RasterClip{w, h, std::vector<std::uint8_t>(w * h, 0)};
}

}  // namespace

TEST_CASE("constant blocks concentrate in the DC coefficient") {
  const std::size_t n = 4;
  const std::vector<double> block(n * n, 1.0);
  const auto coeffs = dct2(block, n);
  CHECK(coeffs[0] == doctest::Approx(4.0).epsilon(1e-12));
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    CHECK(std::abs(coeffs[k]) < 1e-12);
  }
}

TEST_CASE("inverse transform recovers the block") {
  Prng rng(3);
  for (std::size_t n : {2u, 3u, 8u, 12u}) {
    const auto block = random_block(n, rng);
    const auto back = idct2(dct2(block, n), n);
    for (std::size_t k = 0; k < block.size(); ++k) {
      CHECK(std::abs(back[k] - block[k]) < 1e-12);
    }
  }
}

TEST_CASE("the transform preserves energy") {
  Prng rng(11);
  const std::size_t n = 8;
  const auto block = random_block(n, rng);
  const auto coeffs = dct2(block, n);
  const auto energy = [](const std::vector<double>& v) {
    return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
  };
  CHECK(energy(coeffs) ==
        doctest::Approx(energy(block)).epsilon(1e-12));
}

TEST_CASE("diagonal scan order for a three-wide block") {
  const auto order = zigzag_order(3);
  const std::vector<std::pair<std::size_t, std::size_t>> expected = {
      {0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}, {1, 2}, {2, 1}, {2, 2}};
  CHECK(order == expected);
}

TEST_CASE("diagonal scan visits every index exactly once") {
  for (std::size_t n = 1; n <= 16; ++n) {
    const auto order = zigzag_order(n);
    REQUIRE(order.size() == n * n);
    std::vector<int> seen(n * n, 0);
    for (const auto& [r, c] : order) {
      REQUIRE(r < n);
      REQUIRE(c < n);
      seen[r * n + c]++;
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
  }
}

TEST_CASE("flatten keeps a prefix and unflatten zero-pads the rest") {
  Prng rng(5);
  const std::size_t n = 4;
  const auto block = random_block(n, rng);

  const auto full = zigzag_flatten(block, n, n * n);
  const auto restored = zigzag_unflatten(full, n);
  CHECK(restored == block);

  const auto prefix = zigzag_flatten(block, n, 3);
  REQUIRE(prefix.size() == 3);
  CHECK(prefix[0] == block[0]);
  CHECK(prefix[1] == block[1]);      // (0,1)
  CHECK(prefix[2] == block[n]);      // (1,0)
  const auto padded = zigzag_unflatten(prefix, n);
  CHECK(padded[2 * n + 3] == 0.0);

  CHECK_THROWS_AS(zigzag_flatten(block, n, n * n + 1), std::invalid_argument);
}

TEST_CASE("feature tensor stores per-block DCT prefixes") {
  RasterClip clip = blank(6, 6);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      clip.set(r, c, 1);                // block (0, 0)
      clip.set(4 + r, 2 + c, 1);        // block (2, 1)
    }
  }
  const FeatureTensor tensor = feature_tensor(clip, 3, 1);
  REQUIRE(tensor.values.size() == 9);
  // DC of an all-ones 2x2 block under the orthonormal transform is 2.
  CHECK(tensor.at(0, 0, 0) == doctest::Approx(2.0));
  CHECK(tensor.at(2, 1, 0) == doctest::Approx(2.0));
  CHECK(tensor.at(1, 1, 0) == doctest::Approx(0.0));
}

TEST_CASE("keeping every coefficient makes the pipeline lossless") {
  Prng rng(17);
  RasterClip clip = blank(12, 12);
  for (std::size_t i = 0; i < clip.pixels.size(); ++i) {
    clip.pixels[i] = rng.next() & 1;
  }
  const FeatureTensor tensor = feature_tensor(clip, 3, 16);
  CHECK(reconstruct_clip(tensor, 4) == clip);
  CHECK_THROWS_AS(reconstruct_clip(feature_tensor(clip, 3, 8), 4),
                  std::invalid_argument);
}

TEST_CASE("tensor shape validation") {
  const RasterClip clip = blank(12, 12);
  CHECK_THROWS_AS(feature_tensor(clip, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(feature_tensor(clip, 5, 4), std::invalid_argument);
  CHECK_THROWS_AS(feature_tensor(clip, 3, 17), std::invalid_argument);
  CHECK_THROWS_AS(feature_tensor(blank(12, 10), 2, 4), std::invalid_argument);
}

TEST_CASE("tensor files round-trip") {
  Prng rng(23);
  RasterClip clip = blank(8, 8);
  for (std::size_t i = 0; i < clip.pixels.size(); ++i) {
    clip.pixels[i] = rng.next() & 1;
  }
  const FeatureTensor tensor = feature_tensor(clip, 2, 7);
  const auto path =
      std::filesystem::temp_directory_path() / "layoutforge_tensor_test.bin";
  write_tensor(path, tensor);
  CHECK(read_tensor(path) == tensor);
  std::filesystem::remove(path);
}

TEST_CASE("unreadable tensor files are rejected") {
  const auto path =
      std::filesystem::temp_directory_path() / "layoutforge_tensor_bad.bin";
  std::ofstream(path).write("xx", 2);
  CHECK_THROWS_AS(read_tensor(path), std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("circle sampling reads the ring pixels") {
  RasterClip clip = blank(8, 8);
  // Radius-1 ring around the center (4, 4).
  clip.set(4, 5, 1);
  clip.set(4, 3, 1);
  clip.set(5, 4, 1);
  clip.set(3, 4, 1);
  const auto densities = ccas_sample(clip, 2);
  REQUIRE(densities.size() == 2);
  CHECK(densities[0] == doctest::Approx(1.0));
  CHECK(densities[1] == doctest::Approx(0.0));
}

TEST_CASE("circle sampling saturates on full clips and skips off-clip points") {
  RasterClip clip = blank(8, 8);
  std::fill(clip.pixels.begin(), clip.pixels.end(), std::uint8_t{1});
  const auto densities = ccas_sample(clip, 4);
  REQUIRE(densities.size() == 4);
  for (double d : densities) CHECK(d == doctest::Approx(1.0));
  CHECK_THROWS_AS(ccas_sample(clip, 5), std::invalid_argument);
}

TEST_CASE("discretize floors into equal-width bins") {
  const auto bins = discretize({0.0, 0.05, 0.5, 0.99, 1.0, -0.2}, 16);
  CHECK(bins == std::vector<int>{0, 0, 8, 15, 15, 0});
  CHECK(discretize({0.3, 0.7}, 1) == std::vector<int>{0, 0});
  CHECK_THROWS_AS(discretize({0.5}, 0), std::invalid_argument);
}

TEST_CASE("mutual information hits the textbook endpoints") {
  const std::vector<int> y = {0, 1, 0, 1, 0, 1, 0, 1};
  CHECK(mutual_information({5, 5, 5, 5, 5, 5, 5, 5}, y) == 0.0);

  const double ln2 = std::log(2.0);
  CHECK(std::abs(mutual_information(y, y) - ln2) < 1e-12);

  const std::vector<int> indep = {0, 0, 1, 1, 0, 0, 1, 1};
  CHECK(mutual_information(indep, y) == doctest::Approx(0.0).epsilon(1e-12));

  const std::vector<int> c = {0, 2, 0, 2, 1, 2, 0, 1};
  CHECK(mutual_information(c, y) == doctest::Approx(mutual_information(y, c)));

  CHECK_THROWS_AS(mutual_information({1, 2}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(mutual_information({}, {}), std::invalid_argument);
}

namespace {

// Eight alternating labels; chosen circles mirror the label, others sit flat.
std::vector<std::vector<double>> ring_samples(std::size_t r_max,
                                              const std::vector<std::size_t>& live,
                                              const std::vector<int>& labels) {
  std::vector<std::vector<double>> samples;
  for (int label : labels) {
    std::vector<double> row(r_max, 0.5);
    for (std::size_t idx : live) row[idx] = label ? 0.9 : 0.1;
    samples.push_back(std::move(row));
  }
  return samples;
}

}  // namespace

TEST_CASE("circle selection ranks by information and spaces the picks") {
  const std::vector<int> labels = {0, 1, 0, 1, 0, 1, 0, 1};
  const auto samples = ring_samples(6, {0, 1, 3}, labels);

  CircleSelectConfig cfg;
  cfg.count = 2;
  cfg.spacing = 1;
  cfg.bins = 4;
  const auto chosen = select_circles(samples, labels, cfg);
  CHECK(chosen == std::vector<std::size_t>{1, 4});
}

TEST_CASE("circle selection can hunt for the least informative rings") {
  const std::vector<int> labels = {0, 1, 0, 1, 0, 1, 0, 1};
  const auto samples = ring_samples(6, {0, 1, 3}, labels);

  CircleSelectConfig cfg;
  cfg.count = 2;
  cfg.spacing = 0;
  cfg.bins = 4;
  cfg.direction = SelectDirection::kMinimize;
  const auto chosen = select_circles(samples, labels, cfg);
  CHECK(chosen == std::vector<std::size_t>{3, 5});
}

TEST_CASE("circle selection validates its inputs") {
  const std::vector<int> labels = {0, 1, 0, 1, 0, 1, 0, 1};
  const auto samples = ring_samples(6, {0}, labels);

  CircleSelectConfig cfg;
  cfg.count = 0;
  CHECK_THROWS_AS(select_circles(samples, labels, cfg), std::invalid_argument);
  cfg.count = 7;
  CHECK_THROWS_AS(select_circles(samples, labels, cfg), std::invalid_argument);

  cfg.count = 4;
  cfg.spacing = 2;  // needs indices spanning 10 > 6
  CHECK_THROWS_AS(select_circles(samples, labels, cfg), std::invalid_argument);

  cfg.count = 2;
  cfg.spacing = 0;
  auto ragged = samples;
  ragged[1].pop_back();
  CHECK_THROWS_AS(select_circles(ragged, labels, cfg), std::invalid_argument);
}

TEST_CASE("greedy selection reports when the spacing cannot be met") {
  const std::vector<int> labels = {0, 1, 0, 1, 0, 1, 0, 1};
  // Only the middle circle is informative; both neighbors are then blocked.
  const auto samples = ring_samples(3, {1}, labels);
  CircleSelectConfig cfg;
  cfg.count = 2;
  cfg.spacing = 1;
  cfg.bins = 4;
  CHECK_THROWS_AS(select_circles(samples, labels, cfg), std::invalid_argument);
}

TEST_CASE("chosen circles always honor the spacing") {
  Prng rng(31);
  const std::size_t r_max = 12;
  std::vector<int> labels;
  std::vector<std::vector<double>> samples;
  for (int s = 0; s < 40; ++s) {
    labels.push_back(static_cast<int>(rng.next() & 1));
    std::vector<double> row(r_max);
    for (double& v : row) v = rng.next_unit();
    samples.push_back(std::move(row));
  }
  CircleSelectConfig cfg;
  cfg.count = 4;
  cfg.spacing = 2;
  const auto chosen = select_circles(samples, labels, cfg);
  REQUIRE(chosen.size() == 4);
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    CHECK(chosen[i] >= 1);
    CHECK(chosen[i] <= r_max);
    for (std::size_t j = i + 1; j < chosen.size(); ++j) {
      const std::size_t gap =
          chosen[j] > chosen[i] ? chosen[j] - chosen[i] : chosen[i] - chosen[j];
      CHECK(gap > cfg.spacing);
    }
  }
}
