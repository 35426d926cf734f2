#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <random>

#include "chunkblit/seeds.hpp"

using namespace chunkblit;

namespace {

// Literal transcription of the NearestSeed loop: x outer, y inner,
// strictly smaller Euclidean distance replaces the incumbent.
template <typename Jitter>
PixelCoord nearest_seed_reference(const PixelCoord& p, int h, int level, const Jitter& jt) {
  double best = std::numeric_limits<double>::infinity();
  PixelCoord out = p;
  for (int x : {-1, 0, 1})
    for (int y : {-1, 0, 1}) {
      const PixelCoord s = seed_point(PixelCoord(p.x() + h * x, p.y() + h * y), h, level, jt);
      const double d = std::hypot(double(s.x() - p.x()), double(s.y() - p.y()));
      if (d < best) {
        best = d;
        out = s;
      }
    }
  return out;
}

}  // namespace

TEST_CASE("floor_div rounds toward negative infinity") {
  CHECK(floor_div(5, 4) == 1);
  CHECK(floor_div(-1, 4) == -1);
  CHECK(floor_div(-4, 4) == -1);
  CHECK(floor_div(-5, 4) == -2);
  CHECK(floor_div(0, 4) == 0);
}

TEST_CASE("seed_point worked examples") {
  const ConstantJitter zero{};
  const ConstantJitter half_quarter{Eigen::Vector2d(0.5, 0.25)};
  CHECK(seed_point(PixelCoord(0, 0), 4, 1, zero) == PixelCoord(0, 0));
  CHECK(seed_point(PixelCoord(5, 3), 4, 1, half_quarter) == PixelCoord(6, 1));
  CHECK(seed_point(PixelCoord(-1, -1), 4, 1, zero) == PixelCoord(-4, -4));
}

TEST_CASE("nearest_seed worked examples") {
  const ConstantJitter zero{};
  CHECK(nearest_seed(PixelCoord(5, 5), 4, 1, zero) == PixelCoord(4, 4));
  // Four candidates tie at sqrt(8); the (-1,-1) neighbour's seed is met first.
  CHECK(nearest_seed_reference(PixelCoord(6, 6), 4, 1, zero) == PixelCoord(4, 4));
  CHECK(nearest_seed(PixelCoord(6, 6), 4, 1, zero) == PixelCoord(4, 4));
  CHECK(nearest_seed(PixelCoord(8, 12), 4, 1, zero) == PixelCoord(8, 12));

  const JitterTable jt(5);
  const PixelCoord s = seed_point(PixelCoord(17, -9), 8, 2, jt);
  CHECK(nearest_seed(s, 8, 2, jt) == s);
}

TEST_CASE("nearest_seed matches the literal loop and the row cache") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coord(-300, 300);
  for (std::uint64_t seed : {0ull, 1ull, 0xdeadbeefull}) {
    const JitterTable jt(seed);
    for (int h : {2, 3, 4, 8, 16, 64}) {
      for (int level = 1; level <= 3; ++level) {
        for (int i = 0; i < 300; ++i) {
          const PixelCoord p(coord(rng), coord(rng));
          REQUIRE(nearest_seed(p, h, level, jt) == nearest_seed_reference(p, h, level, jt));
        }
        NearestSeedCache<JitterTable> cache(h, level, jt);
        for (int y = -20; y < 20; ++y)
          for (int x = -40; x < 40; ++x)
            REQUIRE(cache(PixelCoord(x, y)) == nearest_seed(PixelCoord(x, y), h, level, jt));
      }
    }
  }
}

TEST_CASE("jitter is a pure function of cell, level and seed") {
  const JitterTable a(42), b(42), c(43);
  int differs_by_seed = 0, differs_by_level = 0;
  for (int i = -50; i < 50; ++i) {
    const PixelCoord cell(i, 3 * i + 1);
    REQUIRE(a(cell, 1) == b(cell, 1));
    REQUIRE((a(cell, 2).array() >= 0.0).all());
    REQUIRE((a(cell, 2).array() < 1.0).all());
    differs_by_seed += a(cell, 1) != c(cell, 1);
    differs_by_level += a(cell, 1) != a(cell, 2);
  }
  CHECK(differs_by_seed == 100);
  CHECK(differs_by_level == 100);
}

TEST_CASE("nearest seed stays within Chebyshev distance 2h") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> coord(-5000, 5000);
  const JitterTable jt(11);
  for (int h : {2, 4, 8, 32}) {
    for (int i = 0; i < 5000; ++i) {
      const PixelCoord p(coord(rng), coord(rng));
      const PixelCoord s = nearest_seed(p, h, 1, jt);
      REQUIRE((s - p).cwiseAbs().maxCoeff() <= 2 * h);
    }
  }
}

TEST_CASE("nearest-seed regions are connected and contain their seed") {
  constexpr int kSize = 64;
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 99ull}) {
    for (int h : {4, 8, 16}) {
      const JitterTable jt(seed);
      std::map<std::pair<int, int>, int> ids;
      std::vector<int> region(kSize * kSize);
      for (int y = 0; y < kSize; ++y)
        for (int x = 0; x < kSize; ++x) {
          const PixelCoord s = nearest_seed(PixelCoord(x, y), h, 1, jt);
          auto [it, fresh] = ids.try_emplace({s.x(), s.y()}, int(ids.size()));
          region[y * kSize + x] = it->second;
        }
      // Each seed inside the domain owns its own pixel.
      for (const auto& [s, id] : ids)
        if (s.first >= 0 && s.second >= 0 && s.first < kSize && s.second < kSize)
          REQUIRE(region[s.second * kSize + s.first] == id);
      // Flood fill: one component per region id. Digitized thin cells can
      // touch only diagonally, so neighbours are 8-connected.
      std::vector<char> seen(kSize * kSize, 0);
      std::vector<int> components(ids.size(), 0);
      for (int start = 0; start < kSize * kSize; ++start) {
        if (seen[start]) continue;
        const int id = region[start];
        ++components[id];
        std::queue<int> todo;
        todo.push(start);
        seen[start] = 1;
        while (!todo.empty()) {
          const int i = todo.front();
          todo.pop();
          const int x = i % kSize, y = i / kSize;
          const int nb[8][2] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1},
                                {x + 1, y + 1}, {x - 1, y - 1}, {x - 1, y + 1}, {x + 1, y - 1}};
          for (const auto& n : nb) {
            if (n[0] < 0 || n[1] < 0 || n[0] >= kSize || n[1] >= kSize) continue;
            const int j = n[1] * kSize + n[0];
            if (seen[j] || region[j] != id) continue;
            seen[j] = 1;
            todo.push(j);
          }
        }
      }
      for (int count : components) REQUIRE(count == 1);
    }
  }
}

TEST_CASE("jitter components are uniform (Kolmogorov-Smirnov)") {
  const JitterTable jt(2024);
  std::vector<double> xs, ys;
  for (int by = 0; by < 200; ++by)
    for (int bx = 0; bx < 200; ++bx) {
      const Eigen::Vector2d j = jt(PixelCoord(bx - 100, by - 100), 3);
      xs.push_back(j.x());
      ys.push_back(j.y());
    }
  for (auto* sample : {&xs, &ys}) {
    std::sort(sample->begin(), sample->end());
    const double n = double(sample->size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample->size(); ++i) {
      const double v = (*sample)[i];
      d = std::max({d, (i + 1) / n - v, v - i / n});
    }
    CHECK(d < 0.02);
  }
}

TEST_CASE("hierarchy parameters") {
  HierarchyParams h;
  h.levels = 3;
  h.spacing_base = 4;
  CHECK(h.spacing(1) == 4);
  CHECK(h.spacing(3) == 16);
  CHECK_NOTHROW(h.validate(64, 64));
  CHECK_THROWS_AS(h.validate(8, 8), ContractViolation);
  h.spacing_base = 1;
  CHECK_THROWS_AS(h.validate(64, 64), ContractViolation);
  h = HierarchyParams{0, 4};
  CHECK_THROWS_AS(h.validate(64, 64), ContractViolation);

  // Top spacing is the largest 4*2^(L-1) not exceeding a quarter of the short side.
  CHECK(HierarchyParams::default_levels(4, 256, 300) == 5);  // 64 <= 64
  CHECK(HierarchyParams::default_levels(4, 255, 300) == 4);  // 32 <= 63
  CHECK(HierarchyParams::default_levels(4, 8, 8) == 1);
  CHECK(HierarchyParams{0, 4}.resolved(256, 256, 20, 20).levels == 3);  // capped by target
  CHECK(HierarchyParams{2, 2}.resolved(256, 256, 20, 20).levels == 2);  // explicit kept
}
