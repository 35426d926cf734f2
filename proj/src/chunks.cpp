#include "chunkblit/chunks.hpp"

#include <algorithm>
#include <numeric>

namespace chunkblit {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ChunkLabels label_chunks(const CoordField& coords, const RasterImage<std::uint8_t>* include) {
  const int w = coords.width(), h = coords.height();
  if (include && (include->width() != w || include->height() != h))
    throw ContractViolation("label_chunks: include mask does not match the field");
  auto active = [&](int x, int y) {
    return !coords(x, y).miss && (!include || (*include)(x, y) != 0);
  };

  DisjointSets sets(std::size_t(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!active(x, y)) continue;
      const PixelCoord d = coords.offset(x, y);
      const std::size_t i = std::size_t(y) * w + x;
      if (x > 0 && active(x - 1, y) && coords.offset(x - 1, y) == d) sets.unite(i, i - 1);
      if (y > 0 && active(x, y - 1) && coords.offset(x, y - 1) == d) sets.unite(i, i - w);
    }

  ChunkLabels out;
  out.width = w;
  out.height = h;
  out.labels.assign(std::size_t(w) * h, -1);
  std::vector<std::int32_t> id_of_root(std::size_t(w) * h, -1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!active(x, y)) continue;
      const std::size_t i = std::size_t(y) * w + x;
      auto& id = id_of_root[sets.find(i)];
      if (id < 0) {
        id = std::int32_t(out.areas.size());
        out.areas.push_back(0);
      }
      out.labels[i] = id;
      ++out.areas[id];
    }
  return out;
}

ChunkStats chunk_stats(const CoordField& coords, int levels, const RasterImage<std::uint8_t>* include) {
  const ChunkLabels chunks = label_chunks(coords, include);
  ChunkStats stats;
  stats.chunk_count = chunks.count();
  stats.level_histogram.assign(std::size_t(std::max(levels, 0)) + 1, 0);

  std::int64_t considered = 0, misses = 0, chunk_pixels = 0;
  int src_w = 0, src_h = 0;
  for (int y = 0; y < coords.height(); ++y)
    for (int x = 0; x < coords.width(); ++x) {
      if (include && (*include)(x, y) == 0) continue;
      const CoordEntry& e = coords(x, y);
      ++considered;
      if (e.miss) ++misses;
      const auto level = std::size_t(std::max(e.level, 0));
      if (level >= stats.level_histogram.size()) stats.level_histogram.resize(level + 1, 0);
      ++stats.level_histogram[level];
      src_w = std::max(src_w, e.src.x() + 1);
      src_h = std::max(src_h, e.src.y() + 1);
    }
  for (const auto area : chunks.areas) chunk_pixels += area;
  stats.miss_rate = considered ? double(misses) / double(considered) : 0.0;
  stats.mean_chunk_area_px = chunks.count() ? double(chunk_pixels) / double(chunks.count()) : 0.0;

  // A chunk is a translated copy, so it covers each source pixel at most once;
  // hits per source pixel therefore count distinct chunks.
  std::vector<std::uint32_t> hits(std::size_t(src_w) * src_h, 0);
  for (int y = 0; y < coords.height(); ++y)
    for (int x = 0; x < coords.width(); ++x) {
      if (chunks.at(x, y) < 0) continue;
      const PixelCoord s = coords(x, y).src;
      if (s.x() < 0 || s.y() < 0) continue;
      auto& n = hits[std::size_t(s.y()) * src_w + s.x()];
      ++n;
      stats.max_source_reuse = std::max<std::size_t>(stats.max_source_reuse, n);
    }
  return stats;
}

}  // namespace chunkblit
