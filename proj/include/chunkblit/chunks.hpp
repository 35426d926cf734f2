#pragma once

#include <cstdint>
#include <vector>

#include "chunkblit/synth.hpp"

namespace chunkblit {

/// Chunk = maximal 4-connected set of non-miss target pixels sharing one
/// offset (src - p). Miss pixels and pixels outside `include` get label -1.
struct ChunkLabels {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;  // row-major, dense ids in first-pixel scan order
  std::vector<std::int64_t> areas;   // per chunk id

  std::size_t count() const { return areas.size(); }
  std::int32_t at(int x, int y) const { return labels[std::size_t(y) * width + x]; }
};

/// `include` (optional, same size as the field) restricts labeling to pixels
/// where it is nonzero, e.g. a target guide mask.
ChunkLabels label_chunks(const CoordField& coords, const RasterImage<std::uint8_t>* include = nullptr);

struct ChunkStats {
  std::size_t chunk_count = 0;
  double mean_chunk_area_px = 0.0;
  double miss_rate = 0.0;
  std::vector<std::int64_t> level_histogram;  // index = level, 0 = fallback
  /// Most distinct chunks copying one source pixel (texture repetition).
  std::size_t max_source_reuse = 0;
};

/// Statistics over the pixels selected by `include` (all pixels when null).
ChunkStats chunk_stats(const CoordField& coords, int levels,
                       const RasterImage<std::uint8_t>* include = nullptr);

}  // namespace chunkblit
