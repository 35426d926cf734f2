#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chunkblit/chunks.hpp"
#include "chunkblit/synth.hpp"

namespace chunkblit::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 configuration or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GuideKind { Normal, Uv, Displacement, Segmentation, Appearance };

struct GuideSpec {
  GuideKind kind = GuideKind::Normal;
  std::string path;
  float weight = 1.0f;
};

/// Parses KIND=PATH or KIND:WEIGHT=PATH.
GuideSpec parse_guide_spec(const std::string& text);
std::string kind_name(GuideKind kind);

/// Loads and composes one side's guides. Displacement guides are normalized
/// by the exemplar extent (reference_width x reference_height).
GuideField load_guides(const std::vector<GuideSpec>& specs, int reference_width,
                       int reference_height);

/// Replaces the first printf-style %d / %0Nd conversion with `index`.
std::string expand_pattern(const std::string& pattern, int index);

struct RunStats {
  ChunkStats chunks;
  double wall_ms = 0.0;
  double mp_per_s = 0.0;
};

RunStats collect_stats(const CoordField& coords, const GuideField& target, int levels,
                       double wall_ms);
nlohmann::json to_json(const RunStats& stats);

/// Mean absolute per-channel difference between consecutive frames.
double flicker_metric(const std::vector<ColorImage>& frames);

/// 64-bit FNV-1a over image bytes and coordinate entries.
std::uint64_t checksum(const ColorImage& image, const CoordField& coords);

ColorImage chunk_visualization(const CoordField& coords, const GuideField& target);

int run(int argc, const char* const* argv);

}  // namespace chunkblit::cli
