#pragma once

#include <algorithm>
#include <cstdint>

#include <Eigen/Core>

#include "chunkblit/core.hpp"

namespace chunkblit {

/// 64-bit avalanche finalizer (splitmix64).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline constexpr int kJitterBits = 24;

/// Stateless jitter table: cell (b, level) maps to a fixed point in [0,1)^2.
/// Jitter components are k / 2^24, so seed placement is exact in integers.
class JitterTable {
 public:
  constexpr JitterTable() = default;
  constexpr explicit JitterTable(std::uint64_t rng_seed)
      : seed_(rng_seed), key_(mix64(rng_seed ^ 0x6a09e667f3bcc909ull)) {}

  std::uint64_t rng_seed() const { return seed_; }

  /// Raw 24-bit jitter numerators.
  Eigen::Vector2i ticks(const PixelCoord& cell, int level) const {
    const std::uint64_t h = mix64(key_ ^ (std::uint64_t(std::uint32_t(cell.x())) * 0x9e3779b97f4a7c15ull) ^
                                  (std::uint64_t(std::uint32_t(cell.y())) * 0xc2b2ae3d27d4eb4full) ^
                                  (std::uint64_t(std::uint32_t(level)) * 0x165667b19e3779f9ull));
    const std::uint64_t mask = (1ull << kJitterBits) - 1;
    return {int(h & mask), int((h >> 32) & mask)};
  }

  Eigen::Vector2d operator()(const PixelCoord& cell, int level) const {
    return ticks(cell, level).cast<double>() / double(1 << kJitterBits);
  }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t key_ = mix64(0x6a09e667f3bcc909ull);
};

/// Jitter fixed to one value for every cell; used to pin seed layouts.
struct ConstantJitter {
  Eigen::Vector2d jitter = Eigen::Vector2d::Zero();

  Eigen::Vector2i ticks(const PixelCoord&, int) const {
    return (jitter * double(1 << kJitterBits)).array().floor().cast<int>().matrix();
  }
};

/// Floor division rounding toward negative infinity.
constexpr int floor_div(int a, int b) {
  const int q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

/// Jittered grid point of the h-by-h cell containing p.
template <typename Jitter>
PixelCoord seed_point(const PixelCoord& p, int spacing, int level, const Jitter& jitter) {
  const PixelCoord cell(floor_div(p.x(), spacing), floor_div(p.y(), spacing));
  const Eigen::Vector2i t = jitter.ticks(cell, level);
  const auto offset = [&](int tick) {
    return int((std::int64_t(spacing) * tick) >> kJitterBits);
  };
  return {cell.x() * spacing + offset(t.x()), cell.y() * spacing + offset(t.y())};
}

/// Closest seed among the 3x3 neighbouring cells. The x offset is the outer
/// loop and only a strictly smaller distance replaces the current best.
/// Equivalent to evaluating seed_point(p + spacing * (x, y)) for each offset.
template <typename Jitter>
PixelCoord nearest_seed(const PixelCoord& p, int spacing, int level, const Jitter& jitter) {
  const PixelCoord home(floor_div(p.x(), spacing), floor_div(p.y(), spacing));
  PixelCoord best = p;
  std::int64_t best_d2 = std::numeric_limits<std::int64_t>::max();
  for (int x = -1; x <= 1; ++x) {
    for (int y = -1; y <= 1; ++y) {
      const PixelCoord cell(home.x() + x, home.y() + y);
      const Eigen::Vector2i t = jitter.ticks(cell, level);
      const std::int64_t sx =
          std::int64_t(cell.x()) * spacing + ((std::int64_t(spacing) * t.x()) >> kJitterBits);
      const std::int64_t sy =
          std::int64_t(cell.y()) * spacing + ((std::int64_t(spacing) * t.y()) >> kJitterBits);
      const std::int64_t dx = sx - p.x();
      const std::int64_t dy = sy - p.y();
      const std::int64_t d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = PixelCoord(int(sx), int(sy));
      }
    }
  }
  return best;
}

/// nearest_seed() with the 3x3 candidate seeds memoized for the most recent
/// home cell. Walking a row reuses them for `spacing` consecutive pixels.
template <typename Jitter>
class NearestSeedCache {
 public:
  NearestSeedCache(int spacing, int level, const Jitter& jitter)
      : spacing_(spacing), level_(level), jitter_(&jitter) {}

  PixelCoord operator()(const PixelCoord& p) {
    const PixelCoord home(floor_div(p.x(), spacing_), floor_div(p.y(), spacing_));
    if (!valid_ || home != home_) refill(home);
    int best = 0;
    std::int64_t best_d2 = std::numeric_limits<std::int64_t>::max();
    for (int i = 0; i < 9; ++i) {
      const std::int64_t dx = seeds_[i].x() - p.x();
      const std::int64_t dy = seeds_[i].y() - p.y();
      const std::int64_t d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    return seeds_[best];
  }

 private:
  void refill(const PixelCoord& home) {
    home_ = home;
    valid_ = true;
    int i = 0;
    for (int x = -1; x <= 1; ++x)
      for (int y = -1; y <= 1; ++y) {
        const PixelCoord cell(home.x() + x, home.y() + y);
        const Eigen::Vector2i t = jitter_->ticks(cell, level_);
        seeds_[i++] = PixelCoord(cell.x() * spacing_ + int((std::int64_t(spacing_) * t.x()) >> kJitterBits),
                                 cell.y() * spacing_ + int((std::int64_t(spacing_) * t.y()) >> kJitterBits));
      }
  }

  int spacing_;
  int level_;
  const Jitter* jitter_;
  bool valid_ = false;
  PixelCoord home_ = PixelCoord::Zero();
  PixelCoord seeds_[9];
};

/// Seed hierarchy shape. Level l (1-based) uses spacing spacing_base * 2^(l-1).
struct HierarchyParams {
  int levels = 0;  // 0 = derive from the exemplar size
  int spacing_base = 4;

  int spacing(int level) const { return spacing_base << (level - 1); }

  /// Largest level count whose top spacing stays within a quarter of the
  /// shorter exemplar side (at least one level).
  static int default_levels(int spacing_base, int exemplar_width, int exemplar_height) {
    const int target = std::max(std::min(exemplar_width, exemplar_height) / 4, 1);
    int levels = 1;
    while ((spacing_base << levels) <= target) ++levels;
    return levels;
  }

  /// Fills in an automatic level count, capped so the top spacing fits the target.
  HierarchyParams resolved(int exemplar_width, int exemplar_height, int target_width,
                           int target_height) const {
    HierarchyParams out = *this;
    if (out.levels == 0 && spacing_base >= 2) {
      out.levels = default_levels(spacing_base, exemplar_width, exemplar_height);
      while (out.levels > 1 && out.spacing(out.levels) > std::max(target_width, target_height))
        --out.levels;
    }
    return out;
  }

  void validate(int target_width, int target_height) const {
    if (levels < 1) throw ContractViolation("hierarchy needs at least one level");
    if (spacing_base < 2) throw ContractViolation("seed spacing base must be at least 2");
    if (levels > 24 || spacing(levels) > std::max(target_width, target_height))
      throw ContractViolation("top-level seed spacing " + std::to_string(spacing_base) + "*2^" +
                              std::to_string(levels - 1) + " exceeds the target extent");
  }
};

}  // namespace chunkblit
