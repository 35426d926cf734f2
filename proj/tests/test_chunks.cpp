#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "chunkblit/assets.hpp"
#include "chunkblit/chunks.hpp"
#include "support/oracles.hpp"

using namespace chunkblit;

namespace {

CoordField offset_field(int w, int h, PixelCoord d) {
  CoordField cf(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) cf(x, y) = {PixelCoord(x, y) + d, 1, false};
  return cf;
}

}  // namespace

TEST_CASE("single offset is one chunk") {
  const CoordField cf = offset_field(9, 7, PixelCoord(3, -1));
  const ChunkLabels labels = label_chunks(cf);
  CHECK(labels.count() == 1);
  CHECK(labels.areas[0] == 63);
  const ChunkStats stats = chunk_stats(cf, 1);
  CHECK(stats.chunk_count == 1);
  CHECK(stats.mean_chunk_area_px == 63.0);
  CHECK(stats.miss_rate == 0.0);
  CHECK(stats.max_source_reuse == 1);
}

TEST_CASE("misses are excluded and diagonal contact does not join") {
  CoordField cf = offset_field(4, 4, PixelCoord(0, 0));
  // Checkerboard of two offsets: 16 singleton chunks.
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x)
      if ((x + y) % 2) cf(x, y).src += PixelCoord(1, 0);
  CHECK(label_chunks(cf).count() == 16);

  cf(1, 1) = {PixelCoord(9, 9), 0, true};
  const ChunkLabels labels = label_chunks(cf);
  CHECK(labels.count() == 15);
  CHECK(labels.at(1, 1) == -1);
  const ChunkStats stats = chunk_stats(cf, 2);
  CHECK(stats.miss_rate == doctest::Approx(1.0 / 16.0));
  CHECK(stats.level_histogram == std::vector<std::int64_t>{1, 15, 0});
}

TEST_CASE("include mask restricts labeling and statistics") {
  const CoordField cf = offset_field(6, 2, PixelCoord(0, 0));
  RasterImage<std::uint8_t> include(6, 2, 1, 1);
  for (int y = 0; y < 2; ++y) include(2, y) = 0;
  const ChunkLabels labels = label_chunks(cf, &include);
  CHECK(labels.count() == 2);
  CHECK(labels.areas == std::vector<std::int64_t>{4, 6});
  const ChunkStats stats = chunk_stats(cf, 1, &include);
  CHECK(stats.level_histogram[1] == 10);
  CHECK(stats.mean_chunk_area_px == 5.0);
}

TEST_CASE("union-find labeling agrees with flood fill") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 5 + trial % 23, h = 3 + trial % 17;
    std::uniform_int_distribution<int> pick(0, 2 + trial % 4);
    CoordField cf(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const int k = pick(rng);
        cf(x, y) = {PixelCoord(x + k, y), k == 0 ? 0 : 1, k == 0};
      }
    auto areas = oracle::bfs_chunk_areas(cf);
    const ChunkLabels labels = label_chunks(cf);
    auto got = labels.areas;
    std::sort(areas.begin(), areas.end());
    std::sort(got.begin(), got.end());
    REQUIRE(got == areas);
    // Labels are constant exactly on equal-offset 4-neighbours.
    for (int y = 0; y < h; ++y)
      for (int x = 0; x + 1 < w; ++x)
        if (labels.at(x, y) >= 0 && labels.at(x + 1, y) >= 0)
          REQUIRE((labels.at(x, y) == labels.at(x + 1, y)) == (cf.offset(x, y) == cf.offset(x + 1, y)));
  }
}

TEST_CASE("source reuse counts distinct chunks on one source pixel") {
  // Three separated horizontal strips, each copying source row 0.
  CoordField cf(5, 5);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x)
      cf(x, y) = y % 2 == 0 ? CoordEntry{PixelCoord(x, 0), 1, false} : CoordEntry{PixelCoord(0, 4), 0, true};
  const ChunkStats stats = chunk_stats(cf, 1);
  CHECK(stats.chunk_count == 3);
  CHECK(stats.max_source_reuse == 3);
  CHECK(stats.miss_rate == doctest::Approx(0.4));
}

TEST_CASE("flat regions repeat exemplar content") {
  const auto sphere = assets::lit_sphere(64);
  const GuideField source = normal_guide(sphere.normals);
  SynthesisParams p;
  p.threshold = 0.1f;
  p.resolve = ResolveMode::Blit;
  const auto run = [&](const ColorImage& normals) {
    const GuideField target = normal_guide(normals);
    const SynthesisResult r = synthesize(sphere.style, source, target, p);
    return chunk_stats(r.coords, resolve_hierarchy(p, source, target).levels, &*target.mask);
  };
  const ChunkStats flat = run(assets::flat_panel_normals(96, 96));
  const ChunkStats curved = run(assets::blob_normals(96, 96));
  MESSAGE("max source reuse: flat panel " << flat.max_source_reuse << ", blob " << curved.max_source_reuse);
  CHECK(flat.max_source_reuse >= 3);
}
