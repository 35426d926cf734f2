#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chunkblit/guidance.hpp"
#include "chunkblit/lookup.hpp"
#include "chunkblit/seeds.hpp"

namespace chunkblit {

enum class ResolveMode { Blit, Vote };

struct SynthesisParams {
  float threshold = 0.1f;
  HierarchyParams hierarchy;
  std::uint64_t rng_seed = 0;
  ResolveMode resolve = ResolveMode::Vote;
  int patch_radius = 2;
  LookupBackend backend = LookupBackend::QuantizedTable;
  int lookup_resolution = kDefaultLookupResolution;
  int workers = 1;

  void validate() const;
};

/// One target pixel's assignment. level counts hierarchy levels from the
/// finest (1) to the coarsest (L); 0 marks the per-pixel lookup fallback.
struct CoordEntry {
  PixelCoord src = PixelCoord::Zero();
  int level = 0;
  bool miss = true;

  friend bool operator==(const CoordEntry&, const CoordEntry&) = default;
};

/// Per-target-pixel source coordinates (a nearest-neighbour field).
class CoordField {
 public:
  CoordField() = default;
  CoordField(int width, int height) : width_(width), height_(height), entries_(std::size_t(width) * height) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return entries_.size(); }

  CoordEntry& operator()(int x, int y) { return entries_[std::size_t(y) * width_ + x]; }
  const CoordEntry& operator()(int x, int y) const { return entries_[std::size_t(y) * width_ + x]; }
  std::span<CoordEntry> entries() { return entries_; }
  std::span<const CoordEntry> entries() const { return entries_; }

  /// src - p for the entry at (x, y).
  PixelCoord offset(int x, int y) const { return (*this)(x, y).src - PixelCoord(x, y); }

  friend bool operator==(const CoordField&, const CoordField&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<CoordEntry> entries_;
};

struct SynthesisResult {
  ColorImage image;
  CoordField coords;
};

/// Optional instrumentation filled by synthesize().
struct KernelProbe {
  std::vector<std::uint32_t> visits;  // per target pixel, row-major
};

/// Sequential reference: scan-line chunk growing by exhaustive exemplar
/// sweeps. Filled pixels get level 1; unfilled ones fall back to lookup.
SynthesisResult blit_bruteforce(const ColorImage& style, const GuideField& source,
                                const GuideField& target, float threshold,
                                LookupBackend backend = LookupBackend::ExactSearch);

/// Hierarchy traversal for a single target pixel. Seeds are clamped to the
/// target raster. Masked-out target pixels go straight to the fallback.
template <typename Jitter>
CoordEntry blit_pixel(const PixelCoord& p, const GuideField& target, const GuideField& source,
                      const GuideLookup& lut, float threshold, const HierarchyParams& hierarchy,
                      const Jitter& jitter) {
  const int tw = target.width(), th = target.height();
  const int sw = source.width(), sh = source.height();
  const int top = target.masked_in(p) ? hierarchy.levels : 0;
  for (int level = top; level >= 1; --level) {
    // Off-raster seeds are moved to the nearest edge pixel before use.
    const PixelCoord seed = clamp_to(nearest_seed(p, hierarchy.spacing(level), level, jitter), tw, th);
    const auto anchor = lut.nearest(target.values_ptr(seed.x(), seed.y()),
                                    target.label(seed.x(), seed.y()));
    if (!anchor) continue;
    const PixelCoord candidate = *anchor + (p - seed);
    if (!in_bounds(candidate, sw, sh) || !source.masked_in(candidate)) continue;
    if (guide_distance_at(target, p, source, candidate) < threshold)
      return {candidate, level, false};
  }
  const float* g = target.values_ptr(p.x(), p.y());
  const auto restricted = lut.nearest(g, target.label(p.x(), p.y()));
  return {restricted ? *restricted : lut.nearest_any(g), 0, true};
}

CoordEntry blit_pixel(const PixelCoord& p, const GuideField& target, const GuideField& source,
                      const GuideLookup& lut, const SynthesisParams& params);

/// Level count used for a given pair of rasters after resolving defaults.
HierarchyParams resolve_hierarchy(const SynthesisParams& params, const GuideField& source,
                                  const GuideField& target);

/// Per-pixel kernel over the whole target. Output is independent of the
/// worker count.
CoordField synthesize_coords(const GuideField& source, const GuideField& target,
                             const GuideLookup& lut, const SynthesisParams& params,
                             KernelProbe* probe = nullptr);

SynthesisResult synthesize(const ColorImage& style, const GuideField& source,
                           const GuideField& target, const GuideLookup& lut,
                           const SynthesisParams& params, KernelProbe* probe = nullptr);

SynthesisResult synthesize(const ColorImage& style, const GuideField& source,
                           const GuideField& target, const SynthesisParams& params);

ColorImage resolve_colors(const CoordField& coords, const ColorImage& style, ResolveMode mode,
                          int patch_radius, int workers = 1);

/// Average of co-located source pixels over all (2r+1)^2 patches covering
/// each target pixel, rounded half up.
ColorImage vote(const CoordField& coords, const ColorImage& style, int patch_radius,
                int workers = 1);

struct AnimationOptions {
  bool reseed = true;
};

std::uint64_t frame_seed(std::uint64_t rng_seed, std::size_t frame);

/// Independent per-frame synthesis; with reseeding, frame i uses frame_seed(seed, i).
std::vector<SynthesisResult> animate(const ColorImage& style, const GuideField& source,
                                     std::span<const GuideField> frames,
                                     const SynthesisParams& params,
                                     AnimationOptions options = {});

/// Validates that style and source guide agree and the target fits the source.
void check_synthesis_inputs(const ColorImage& style, const GuideField& source,
                            const GuideField& target);

}  // namespace chunkblit
