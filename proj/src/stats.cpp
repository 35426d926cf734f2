#include <cmath>

#include "chunkblit/cli.hpp"
#include "chunkblit/seeds.hpp"

namespace chunkblit::cli {

RunStats collect_stats(const CoordField& coords, const GuideField& target, int levels,
                       double wall_ms) {
  RunStats stats;
  stats.chunks = chunk_stats(coords, levels, target.mask ? &*target.mask : nullptr);
  stats.wall_ms = wall_ms;
  const double pixels = double(coords.width()) * coords.height();
  stats.mp_per_s = wall_ms > 0.0 ? pixels / (wall_ms * 1e3) : 0.0;
  return stats;
}

nlohmann::json to_json(const RunStats& stats) {
  return {{"chunk_count", stats.chunks.chunk_count},
          {"mean_chunk_area_px", stats.chunks.mean_chunk_area_px},
          {"miss_rate", stats.chunks.miss_rate},
          {"level_histogram", stats.chunks.level_histogram},
          {"max_source_reuse", stats.chunks.max_source_reuse},
          {"wall_ms", stats.wall_ms},
          {"mp_per_s", stats.mp_per_s}};
}

double flicker_metric(const std::vector<ColorImage>& frames) {
  if (frames.size() < 2) return 0.0;
  double total = 0.0;
  std::size_t samples = 0;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const auto& a = frames[i - 1].data();
    const auto& b = frames[i].data();
    if (a.size() != b.size()) throw ContractViolation("flicker_metric: frame sizes differ");
    total += (a.template cast<double>() - b.template cast<double>()).abs().sum();
    samples += std::size_t(a.size());
  }
  return total / double(samples);
}

std::uint64_t checksum(const ColorImage& image, const CoordField& coords) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&](std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  feed(std::uint64_t(image.width()), 4);
  feed(std::uint64_t(image.height()), 4);
  feed(std::uint64_t(image.channels()), 4);
  for (const auto byte : image.data()) feed(byte, 1);
  for (const auto& e : coords.entries()) {
    feed(std::uint32_t(e.src.x()), 4);
    feed(std::uint32_t(e.src.y()), 4);
    feed(std::uint32_t(e.level), 4);
    feed(e.miss, 1);
  }
  return h;
}

ColorImage chunk_visualization(const CoordField& coords, const GuideField& target) {
  const ChunkLabels chunks = label_chunks(coords, target.mask ? &*target.mask : nullptr);
  ColorImage out(coords.width(), coords.height(), 3);
  for (int y = 0; y < coords.height(); ++y)
    for (int x = 0; x < coords.width(); ++x) {
      const auto id = chunks.at(x, y);
      if (id < 0) continue;
      const std::uint64_t h = mix64(std::uint64_t(id));
      for (int k = 0; k < 3; ++k) out(x, y, k) = std::uint8_t(64 + ((h >> (8 * k)) & 0xbf));
    }
  return out;
}

}  // namespace chunkblit::cli
