#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "chunkblit/guidance.hpp"

namespace chunkblit {

enum class LookupBackend { QuantizedTable, ExactSearch };

inline constexpr int kDefaultLookupResolution = 256;

/// Answers argmin_u ||g - G_S[u]|| over masked-in source pixels.
///
/// When the source carries hard labels, a labeled query is restricted to
/// source pixels with the same label and yields nullopt if there are none.
/// Exact ties resolve to the first pixel in row-major order.
class GuideLookup {
 public:
  LookupBackend backend() const { return backend_; }
  int resolution() const { return resolution_; }
  int channels() const { return channels_; }

  std::optional<PixelCoord> nearest(const float* values, std::optional<std::int32_t> label) const;
  /// Ignores labels entirely.
  PixelCoord nearest_any(const float* values) const;

  friend GuideLookup build_lookup(const GuideField& source, LookupBackend backend,
                                  int resolution);

  /// Bin occupant table of the unrestricted partition (table backend only),
  /// row-major over (bin_y, bin_x); entries are pixel indices.
  const std::vector<std::int32_t>& table() const { return all_.bins; }

 private:
  struct KdNode {
    float split = 0.0f;
    std::int32_t axis = -1;  // -1 for leaves
    std::int32_t left = -1, right = -1;
    std::int32_t begin = 0, end = 0;
  };

  struct Partition {
    // Shared by both backends: member pixel indices and their guide values.
    std::vector<std::int32_t> pixels;
    std::vector<float> points;  // pixels.size() * channels
    std::vector<std::int32_t> bins;
    std::vector<KdNode> nodes;
  };

  void build_partition(Partition& part) const;
  void build_table(Partition& part) const;
  void build_tree(Partition& part) const;
  std::int32_t query(const Partition& part, const float* values) const;
  std::int32_t query_table(const Partition& part, const float* values) const;
  std::int32_t query_tree(const Partition& part, const float* values) const;
  PixelCoord coord(std::int32_t index) const { return {index % width_, index / width_}; }

  LookupBackend backend_ = LookupBackend::ExactSearch;
  int resolution_ = kDefaultLookupResolution;
  int channels_ = 0;
  int width_ = 0;
  Eigen::VectorXf weights_;
  bool labeled_ = false;
  Partition all_;
  std::map<std::int32_t, Partition> by_label_;
};

GuideLookup build_lookup(const GuideField& source, LookupBackend backend,
                         int resolution = kDefaultLookupResolution);

/// Restricted argmin; nullopt is the no-match sentinel.
std::optional<PixelCoord> lookup_nearest(const GuideLookup& lut, const GuideVector& g);

}  // namespace chunkblit
