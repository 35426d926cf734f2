#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chunkblit/core.hpp"

namespace chunkblit {

/// Multi-channel guidance raster. Channel values are normalized to [0,1];
/// labels (hard segmentation) and mask (validity) are optional and, when
/// present, match the raster dimensions.
struct GuideField {
  RasterImage<float> raster;
  Eigen::VectorXf weights;
  std::optional<RasterImage<std::int32_t>> labels;
  std::optional<RasterImage<std::uint8_t>> mask;

  GuideField() = default;
  explicit GuideField(RasterImage<float> r);
  GuideField(RasterImage<float> r, Eigen::VectorXf w);

  int width() const { return raster.width(); }
  int height() const { return raster.height(); }
  int channels() const { return raster.channels(); }

  bool masked_in(int x, int y) const { return !mask || (*mask)(x, y) != 0; }
  bool masked_in(const PixelCoord& p) const { return masked_in(p.x(), p.y()); }

  const float* values_ptr(int x, int y) const {
    return raster.data().data() + raster.offset(x, y);
  }

  std::optional<std::int32_t> label(int x, int y) const {
    if (!labels) return std::nullopt;
    return (*labels)(x, y);
  }

  GuideVector sample(const PixelCoord& p) const;

  /// Throws ContractViolation when weights, labels or mask disagree with the raster.
  void validate() const;

  std::size_t masked_in_count() const;
};

/// Guide error between target pixel p of `target` and source pixel q of
/// `source`, using the source weights. Both pixels must be in bounds.
inline float guide_distance_at(const GuideField& target, const PixelCoord& p,
                               const GuideField& source, const PixelCoord& q) {
  if (source.labels && target.labels &&
      (*source.labels)(q.x(), q.y()) != (*target.labels)(p.x(), p.y()))
    return kInfiniteError;
  return weighted_distance(target.values_ptr(p.x(), p.y()), source.values_ptr(q.x(), q.y()),
                           source.weights.data(), source.channels());
}

/// Checks that two fields can be compared channel by channel.
void require_compatible(const GuideField& target, const GuideField& source);

// Decoders from 8-bit rasters (one value per byte, divided by 255).

/// Normal map texel (RGB in [0,1]) to the 2-channel front-hemisphere guide.
/// Returns nullopt for back-facing or degenerate normals.
std::optional<Eigen::Vector2f> decode_normal(const Eigen::Vector3f& rgb);

GuideField normal_guide(const ColorImage& rgb);
GuideField uv_guide(const ColorImage& rg);
/// RG channels carry per-pixel offsets (value - 128) in pixels; the guide is
/// the displaced position normalized by the reference (exemplar) extent.
GuideField displacement_guide(const ColorImage& rg, int reference_width, int reference_height);
/// Grayscale images use the gray value as label; colour images pack RGB.
/// The result has one zero channel with weight 0 next to the labels.
GuideField segmentation_guide(const ColorImage& labels);
GuideField appearance_guide(const ColorImage& gray);

/// Guide whose pixel (x, y) holds (x/(w-1), y/(h-1)).
GuideField uv_identity_guide(int width, int height);

GuideField with_uniform_weight(GuideField field, float weight);

/// Channel-wise concatenation of guide parts. Weights are carried per part,
/// masks intersect, and labels come from the (single) labeled part. A labeled
/// part whose weights are all zero (segmentation_guide output) contributes its
/// labels but no channels, unless it is the only part.
GuideField compose_guides(std::span<const GuideField> parts);

}  // namespace chunkblit
