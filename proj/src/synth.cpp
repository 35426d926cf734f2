#include "chunkblit/synth.hpp"

#include <algorithm>
#include <string>

#include <omp.h>

namespace chunkblit {

void SynthesisParams::validate() const {
  if (!(threshold >= 0.0f)) throw ContractViolation("threshold must be non-negative");
  if (resolve == ResolveMode::Vote && patch_radius < 1)
    throw ContractViolation("vote mode needs patch radius >= 1");
  if (workers < 1) throw ContractViolation("worker count must be positive");
  if (lookup_resolution < 1) throw ContractViolation("lookup resolution must be positive");
}

void check_synthesis_inputs(const ColorImage& style, const GuideField& source,
                            const GuideField& target) {
  if (style.empty()) throw ContractViolation("style exemplar is empty");
  source.validate();
  target.validate();
  if (style.width() != source.width() || style.height() != source.height())
    throw ContractViolation("style exemplar is " + std::to_string(style.width()) + "x" +
                            std::to_string(style.height()) + " but source guide is " +
                            std::to_string(source.width()) + "x" +
                            std::to_string(source.height()));
  require_compatible(target, source);
}

HierarchyParams resolve_hierarchy(const SynthesisParams& params, const GuideField& source,
                                  const GuideField& target) {
  const HierarchyParams h = params.hierarchy.resolved(source.width(), source.height(),
                                                      target.width(), target.height());
  h.validate(target.width(), target.height());
  return h;
}

SynthesisResult blit_bruteforce(const ColorImage& style, const GuideField& source,
                                const GuideField& target, float threshold,
                                LookupBackend backend) {
  check_synthesis_inputs(style, source, target);
  if (!(threshold >= 0.0f)) throw ContractViolation("threshold must be non-negative");
  const GuideLookup lut = build_lookup(source, backend);

  const int tw = target.width(), th = target.height();
  const int sw = source.width(), sh = source.height();
  CoordField coords(tw, th);
  std::vector<std::uint8_t> filled(std::size_t(tw) * th, 0);

  for (int py = 0; py < th; ++py) {
    for (int px = 0; px < tw; ++px) {
      if (filled[std::size_t(py) * tw + px] || !target.masked_in(px, py)) continue;
      const auto anchor = lut.nearest(target.values_ptr(px, py), target.label(px, py));
      if (!anchor) continue;
      // Exemplar pixel q lands on target q + shift.
      const PixelCoord shift = PixelCoord(px, py) - *anchor;
      const int qx0 = std::max(0, -shift.x()), qx1 = std::min(sw, tw - shift.x());
      const int qy0 = std::max(0, -shift.y()), qy1 = std::min(sh, th - shift.y());
      for (int qy = qy0; qy < qy1; ++qy) {
        for (int qx = qx0; qx < qx1; ++qx) {
          const PixelCoord q(qx, qy);
          const PixelCoord t = q + shift;
          auto& slot = filled[std::size_t(t.y()) * tw + t.x()];
          if (slot || !target.masked_in(t) || !source.masked_in(q)) continue;
          if (guide_distance_at(target, t, source, q) < threshold) {
            slot = 1;
            coords(t.x(), t.y()) = {q, 1, false};
          }
        }
      }
    }
  }

  for (int y = 0; y < th; ++y)
    for (int x = 0; x < tw; ++x) {
      if (filled[std::size_t(y) * tw + x]) continue;
      const float* g = target.values_ptr(x, y);
      const auto restricted = lut.nearest(g, target.label(x, y));
      coords(x, y) = {restricted ? *restricted : lut.nearest_any(g), 0, true};
    }

  SynthesisResult out;
  out.image = resolve_colors(coords, style, ResolveMode::Blit, 1);
  out.coords = std::move(coords);
  return out;
}

CoordEntry blit_pixel(const PixelCoord& p, const GuideField& target, const GuideField& source,
                      const GuideLookup& lut, const SynthesisParams& params) {
  const HierarchyParams h = resolve_hierarchy(params, source, target);
  return blit_pixel(p, target, source, lut, params.threshold, h, JitterTable(params.rng_seed));
}

namespace {

// Row-walking form of blit_pixel(): identical results, but the candidate
// seeds of each level and the lookup of the last chosen seed are memoized.
class KernelWalker {
 public:
  KernelWalker(const GuideField& target, const GuideField& source, const GuideLookup& lut,
               float threshold, const HierarchyParams& hierarchy, const JitterTable& jitter)
      : target_(target), source_(source), lut_(lut), threshold_(threshold),
        levels_(hierarchy.levels) {
    for (int level = 1; level <= levels_; ++level) {
      caches_.emplace_back(hierarchy.spacing(level), level, jitter);
      anchors_.push_back({});
    }
  }

  CoordEntry operator()(const PixelCoord& p) {
    const int top = target_.masked_in(p) ? levels_ : 0;
    for (int level = top; level >= 1; --level) {
      const PixelCoord seed = clamp_to(caches_[level - 1](p), target_.width(), target_.height());
      AnchorMemo& memo = anchors_[level - 1];
      if (!memo.valid || memo.seed != seed) {
        memo.anchor = lut_.nearest(target_.values_ptr(seed.x(), seed.y()),
                                   target_.label(seed.x(), seed.y()));
        memo.seed = seed;
        memo.valid = true;
      }
      if (!memo.anchor) continue;
      const PixelCoord candidate = *memo.anchor + (p - seed);
      if (!in_bounds(candidate, source_.width(), source_.height()) || !source_.masked_in(candidate))
        continue;
      if (guide_distance_at(target_, p, source_, candidate) < threshold_)
        return {candidate, level, false};
    }
    const float* g = target_.values_ptr(p.x(), p.y());
    const auto restricted = lut_.nearest(g, target_.label(p.x(), p.y()));
    return {restricted ? *restricted : lut_.nearest_any(g), 0, true};
  }

 private:
  struct AnchorMemo {
    bool valid = false;
    PixelCoord seed = PixelCoord::Zero();
    std::optional<PixelCoord> anchor;
  };

  const GuideField& target_;
  const GuideField& source_;
  const GuideLookup& lut_;
  float threshold_;
  int levels_;
  std::vector<NearestSeedCache<JitterTable>> caches_;
  std::vector<AnchorMemo> anchors_;
};

}  // namespace

CoordField synthesize_coords(const GuideField& source, const GuideField& target,
                             const GuideLookup& lut, const SynthesisParams& params,
                             KernelProbe* probe) {
  params.validate();
  require_compatible(target, source);
  if (lut.channels() != source.channels())
    throw ContractViolation("lookup channel count does not match the source guide");
  const HierarchyParams hierarchy = resolve_hierarchy(params, source, target);
  const JitterTable jitter(params.rng_seed);
  const int tw = target.width(), th = target.height();
  const float threshold = params.threshold;

  CoordField coords(tw, th);
  std::uint32_t* visits = nullptr;
  if (probe) {
    probe->visits.assign(std::size_t(tw) * th, 0);
    visits = probe->visits.data();
  }

#pragma omp parallel for num_threads(params.workers) schedule(static)
  for (int y = 0; y < th; ++y) {
    KernelWalker kernel(target, source, lut, threshold, hierarchy, jitter);
    for (int x = 0; x < tw; ++x) {
      coords(x, y) = kernel(PixelCoord(x, y));
      if (visits) ++visits[std::size_t(y) * tw + x];
    }
  }
  return coords;
}

SynthesisResult synthesize(const ColorImage& style, const GuideField& source,
                           const GuideField& target, const GuideLookup& lut,
                           const SynthesisParams& params, KernelProbe* probe) {
  check_synthesis_inputs(style, source, target);
  SynthesisResult out;
  out.coords = synthesize_coords(source, target, lut, params, probe);
  out.image = resolve_colors(out.coords, style, params.resolve, params.patch_radius, params.workers);
  return out;
}

SynthesisResult synthesize(const ColorImage& style, const GuideField& source,
                           const GuideField& target, const SynthesisParams& params) {
  params.validate();
  check_synthesis_inputs(style, source, target);
  const GuideLookup lut = build_lookup(source, params.backend, params.lookup_resolution);
  return synthesize(style, source, target, lut, params);
}

ColorImage resolve_colors(const CoordField& coords, const ColorImage& style, ResolveMode mode,
                          int patch_radius, int workers) {
  if (mode == ResolveMode::Vote) return vote(coords, style, patch_radius, workers);
  const int c = style.channels();
  ColorImage out(coords.width(), coords.height(), c);
#pragma omp parallel for num_threads(workers) schedule(static)
  for (int y = 0; y < coords.height(); ++y)
    for (int x = 0; x < coords.width(); ++x) {
      const PixelCoord s = clamp_to(coords(x, y).src, style.width(), style.height());
      out.pixel(x, y) = style.pixel(s.x(), s.y());
    }
  return out;
}

ColorImage vote(const CoordField& coords, const ColorImage& style, int patch_radius,
                int workers) {
  if (patch_radius < 1) throw ContractViolation("vote: patch radius must be >= 1");
  const int tw = coords.width(), th = coords.height();
  const int sw = style.width(), sh = style.height();
  const int c = style.channels();
  const int r = patch_radius;
  ColorImage out(tw, th, c);

#pragma omp parallel for num_threads(workers) schedule(static)
  for (int y = 0; y < th; ++y) {
    std::uint32_t sum[kMaxChannels];
    for (int x = 0; x < tw; ++x) {
      std::fill_n(sum, c, 0u);
      std::uint32_t n = 0;
      for (int qy = std::max(0, y - r); qy <= std::min(th - 1, y + r); ++qy) {
        for (int qx = std::max(0, x - r); qx <= std::min(tw - 1, x + r); ++qx) {
          const PixelCoord s = coords(qx, qy).src + PixelCoord(x - qx, y - qy);
          if (!in_bounds(s, sw, sh)) continue;
          const std::uint8_t* v = style.data().data() + style.offset(s.x(), s.y());
          for (int k = 0; k < c; ++k) sum[k] += v[k];
          ++n;
        }
      }
      if (n == 0) {
        const PixelCoord s = clamp_to(coords(x, y).src, sw, sh);
        out.pixel(x, y) = style.pixel(s.x(), s.y());
        continue;
      }
      for (int k = 0; k < c; ++k) out(x, y, k) = std::uint8_t((sum[k] + n / 2) / n);
    }
  }
  return out;
}

std::uint64_t frame_seed(std::uint64_t rng_seed, std::size_t frame) {
  return mix64(rng_seed ^ mix64(0x3c6ef372fe94f82bull + frame));
}

std::vector<SynthesisResult> animate(const ColorImage& style, const GuideField& source,
                                     std::span<const GuideField> frames,
                                     const SynthesisParams& params, AnimationOptions options) {
  params.validate();
  if (frames.empty()) return {};
  for (const auto& frame : frames) {
    if (frame.width() != frames.front().width() || frame.height() != frames.front().height())
      throw ContractViolation("animation frames differ in dimensions");
    check_synthesis_inputs(style, source, frame);
  }
  const GuideLookup lut = build_lookup(source, params.backend, params.lookup_resolution);

  std::vector<SynthesisResult> out(frames.size());
  const int count = int(frames.size());
#pragma omp parallel for num_threads(params.workers) schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    SynthesisParams frame_params = params;
    frame_params.workers = 1;
    if (options.reseed) frame_params.rng_seed = frame_seed(params.rng_seed, std::size_t(i));
    out[i] = synthesize(style, source, frames[i], lut, frame_params);
  }
  return out;
}

}  // namespace chunkblit
