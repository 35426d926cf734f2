#pragma once

// Reference implementations used only by tests. They share nothing with the
// library's search, traversal or voting code paths.

#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <vector>

#include "chunkblit/chunks.hpp"
#include "chunkblit/guidance.hpp"
#include "chunkblit/synth.hpp"

namespace oracle {

using namespace chunkblit;

/// Linear-scan argmin with row-major tie breaking. When `label` is set and
/// the source is labeled, only equally labeled pixels compete.
inline std::optional<PixelCoord> brute_argmin(const GuideField& source, const float* query,
                                              std::optional<std::int32_t> label) {
  std::optional<PixelCoord> best;
  float best_d = std::numeric_limits<float>::infinity();
  for (int y = 0; y < source.height(); ++y)
    for (int x = 0; x < source.width(); ++x) {
      if (!source.masked_in(x, y)) continue;
      if (label && source.labels && (*source.labels)(x, y) != *label) continue;
      const float d = weighted_distance(query, source.values_ptr(x, y), source.weights.data(),
                                        source.channels());
      if (!best || d < best_d) {
        best = PixelCoord(x, y);
        best_d = d;
      }
    }
  return best;
}

/// Independent error-bound check: every non-miss pixel must satisfy
/// ||G_T[p] - G_S[src]|| < t with src inside the exemplar. Recomputes the
/// distance channel by channel in double precision, then applies the float
/// rounding used by the contract.
inline std::size_t error_bound_violations(const CoordField& coords, const GuideField& target,
                                          const GuideField& source, float threshold) {
  std::size_t bad = 0;
  for (int y = 0; y < coords.height(); ++y)
    for (int x = 0; x < coords.width(); ++x) {
      const CoordEntry& e = coords(x, y);
      if (e.miss) continue;
      const PixelCoord s = e.src;
      if (s.x() < 0 || s.y() < 0 || s.x() >= source.width() || s.y() >= source.height()) {
        ++bad;
        continue;
      }
      if (source.labels && target.labels && (*source.labels)(s.x(), s.y()) != (*target.labels)(x, y)) {
        ++bad;
        continue;
      }
      float sum = 0.0f;
      for (int c = 0; c < source.channels(); ++c) {
        const float d = target.raster(x, y, c) - source.raster(s.x(), s.y(), c);
        sum += source.weights[c] * (d * d);
      }
      if (!(std::sqrt(sum) < threshold)) ++bad;
    }
  return bad;
}

/// Direct O(N (2r+1)^2) voting with the same half-up integer rounding.
inline ColorImage reference_vote(const CoordField& coords, const ColorImage& style, int r) {
  ColorImage out(coords.width(), coords.height(), style.channels());
  for (int y = 0; y < coords.height(); ++y)
    for (int x = 0; x < coords.width(); ++x)
      for (int c = 0; c < style.channels(); ++c) {
        unsigned sum = 0, n = 0;
        for (int dy = -r; dy <= r; ++dy)
          for (int dx = -r; dx <= r; ++dx) {
            const int qx = x + dx, qy = y + dy;
            if (qx < 0 || qy < 0 || qx >= coords.width() || qy >= coords.height()) continue;
            const int sx = coords(qx, qy).src.x() - dx, sy = coords(qx, qy).src.y() - dy;
            if (sx < 0 || sy < 0 || sx >= style.width() || sy >= style.height()) continue;
            sum += style(sx, sy, c);
            ++n;
          }
        if (n == 0) {
          const int sx = std::clamp(coords(x, y).src.x(), 0, style.width() - 1);
          const int sy = std::clamp(coords(x, y).src.y(), 0, style.height() - 1);
          out(x, y, c) = style(sx, sy, c);
        } else {
          out(x, y, c) = std::uint8_t((sum + n / 2) / n);
        }
      }
  return out;
}

/// Flood-fill chunk count (4-connectivity, equal offset, non-miss only).
inline std::vector<std::int64_t> bfs_chunk_areas(const CoordField& coords) {
  const int w = coords.width(), h = coords.height();
  std::vector<char> seen(std::size_t(w) * h, 0);
  std::vector<std::int64_t> areas;
  for (int y0 = 0; y0 < h; ++y0)
    for (int x0 = 0; x0 < w; ++x0) {
      if (seen[std::size_t(y0) * w + x0] || coords(x0, y0).miss) continue;
      const PixelCoord d = coords(x0, y0).src - PixelCoord(x0, y0);
      std::int64_t area = 0;
      std::queue<PixelCoord> todo;
      todo.push({x0, y0});
      seen[std::size_t(y0) * w + x0] = 1;
      while (!todo.empty()) {
        const PixelCoord p = todo.front();
        todo.pop();
        ++area;
        const PixelCoord nbrs[] = {{p.x() + 1, p.y()}, {p.x() - 1, p.y()}, {p.x(), p.y() + 1}, {p.x(), p.y() - 1}};
        for (const auto& q : nbrs) {
          if (q.x() < 0 || q.y() < 0 || q.x() >= w || q.y() >= h) continue;
          auto& s = seen[std::size_t(q.y()) * w + q.x()];
          if (s || coords(q.x(), q.y()).miss) continue;
          if (coords(q.x(), q.y()).src - q != d) continue;
          s = 1;
          todo.push(q);
        }
      }
      areas.push_back(area);
    }
  return areas;
}

/// Smooth 2-channel guide: a mild bilinear-plus-sine warp of the unit square.
inline GuideField smooth_guide(int w, int h, float phase = 0.0f) {
  RasterImage<float> r(w, h, 2);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const float u = float(x) / float(std::max(w - 1, 1));
      const float v = float(y) / float(std::max(h - 1, 1));
      r(x, y, 0) = std::clamp(0.05f + 0.9f * u + 0.03f * std::sin(6.0f * v + phase), 0.0f, 1.0f);
      r(x, y, 1) = std::clamp(0.05f + 0.9f * v + 0.03f * std::sin(5.0f * u - phase), 0.0f, 1.0f);
    }
  return GuideField(std::move(r));
}

inline ColorImage random_style(int w, int h, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  ColorImage img(w, h, 3);
  for (auto& v : img.data()) v = std::uint8_t(byte(rng));
  return img;
}

}  // namespace oracle
