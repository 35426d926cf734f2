#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "chunkblit/core.hpp"

using namespace chunkblit;

namespace {

GuideVector vec(std::initializer_list<float> v, std::optional<std::int32_t> label = std::nullopt) {
  GuideVector g;
  g.values.resize(int(v.size()));
  int i = 0;
  for (float x : v) g.values[i++] = x;
  g.label = label;
  return g;
}

GuideVector random_vec(std::mt19937& rng, int channels) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  GuideVector g;
  g.values.resize(channels);
  for (int c = 0; c < channels; ++c) g.values[c] = u(rng);
  return g;
}

}  // namespace

TEST_CASE("guide_distance worked examples") {
  const Eigen::Vector2f ones(1.0f, 1.0f);
  CHECK(guide_distance(vec({0.3f, 0.7f}), vec({0.3f, 0.7f}), ones) == 0.0f);
  CHECK(guide_distance(vec({0.0f, 0.0f}), vec({0.6f, 0.8f}), ones) == doctest::Approx(1.0f).epsilon(1e-6));
  CHECK(guide_distance(vec({0.5f, 0.5f}, 1), vec({0.5f, 0.5f}, 2), ones) == kInfiniteError);
  // A single label never conflicts.
  CHECK(guide_distance(vec({0.5f, 0.5f}, 1), vec({0.5f, 0.5f}), ones) == 0.0f);
}

TEST_CASE("guide_distance rejects malformed input") {
  CHECK_THROWS_AS(guide_distance(vec({0.1f, 0.2f}), vec({0.1f, 0.2f, 0.3f}), Eigen::Vector2f::Ones()),
                  ContractViolation);
  CHECK_THROWS_AS(guide_distance(vec({0.1f, 0.2f}), vec({0.1f, 0.2f}), Eigen::Vector3f::Ones()),
                  ContractViolation);
  CHECK_THROWS_AS(guide_distance(vec({0.1f, 0.2f}), vec({0.1f, 0.2f}), Eigen::Vector2f(1.0f, -1.0f)),
                  ContractViolation);
}

TEST_CASE("guide_distance is a metric on random vectors") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<float> wdist(0.0f, 2.0f);
  for (int trial = 0; trial < 2000; ++trial) {
    const int channels = 1 + trial % kMaxChannels;
    Eigen::VectorXf w(channels);
    for (int c = 0; c < channels; ++c) w[c] = 0.05f + wdist(rng);
    const auto a = random_vec(rng, channels), b = random_vec(rng, channels), c = random_vec(rng, channels);
    const float ab = guide_distance(a, b, w), ba = guide_distance(b, a, w);
    const float bc = guide_distance(b, c, w), ac = guide_distance(a, c, w);
    REQUIRE(ab >= 0.0f);
    REQUIRE(ab == ba);
    REQUIRE(guide_distance(a, a, w) == 0.0f);
    if (!(a.values.array() == b.values.array()).all()) REQUIRE(ab > 0.0f);
    REQUIRE(ac <= ab + bc + 1e-6f);
  }
}

TEST_CASE("guide_distance is monotone in each weight") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<float> bump(0.0f, 1.0f);
  for (int trial = 0; trial < 1000; ++trial) {
    const int channels = 1 + trial % kMaxChannels;
    const auto a = random_vec(rng, channels), b = random_vec(rng, channels);
    Eigen::VectorXf w = Eigen::VectorXf::Constant(channels, 0.5f);
    const float before = guide_distance(a, b, w);
    w[trial % channels] += bump(rng);
    REQUIRE(guide_distance(a, b, w) >= before);
  }
}

TEST_CASE("in_bounds") {
  const RasterImage<float> one(1, 1, 1);
  const RasterImage<float> img(7, 5, 2);
  CHECK(in_bounds(PixelCoord(0, 0), one));
  CHECK_FALSE(in_bounds(PixelCoord(-1, 0), img));
  CHECK_FALSE(in_bounds(PixelCoord(img.width(), 0), img));
  CHECK_FALSE(in_bounds(PixelCoord(0, img.height()), img));
  CHECK(in_bounds(PixelCoord(6, 4), img));
}

TEST_CASE("RasterImage shape invariants") {
  const RasterImage<std::uint8_t> img(5, 3, 4, 9);
  CHECK(img.data().size() == 5 * 3 * 4);
  CHECK(img(4, 2, 3) == 9);
  CHECK_THROWS_AS(RasterImage<float>(0, 3, 1), ContractViolation);
  CHECK_THROWS_AS(RasterImage<float>(3, 3, 0), ContractViolation);
  CHECK_THROWS_AS(RasterImage<float>(3, 3, 9), ContractViolation);

  RasterImage<float> rgb(2, 2, 3);
  rgb.pixel(1, 0) << 0.1f, 0.2f, 0.3f;
  CHECK(rgb(1, 0, 2) == 0.3f);
  CHECK(rgb.offset(1, 1) == 9);
}
