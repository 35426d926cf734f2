#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace chunkblit {

/// Integer pixel coordinate (x = column, y = row). May leave the raster
/// during arithmetic; check with in_bounds() before dereferencing.
using PixelCoord = Eigen::Vector2i;

inline constexpr int kMaxChannels = 8;

/// Infinite guidance error, produced when two hard labels disagree.
inline constexpr float kInfiniteError = std::numeric_limits<float>::infinity();

struct ContractViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyExemplarError : std::runtime_error {
  EmptyExemplarError() : std::runtime_error("source guide has no masked-in pixels") {}
};

/// Row-major interleaved pixel grid.
template <typename Scalar>
class RasterImage {
 public:
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using PixelMap = Eigen::Map<Eigen::Array<Scalar, Eigen::Dynamic, 1>>;
  using ConstPixelMap = Eigen::Map<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>;

  RasterImage() = default;

  RasterImage(int width, int height, int channels, Scalar fill = Scalar(0))
      : width_(width), height_(height), channels_(channels) {
    if (width < 1 || height < 1)
      throw ContractViolation("raster dimensions must be positive");
    if (channels < 1 || channels > kMaxChannels)
      throw ContractViolation("raster channel count must be in [1, 8]");
    data_ = Storage::Constant(Eigen::Index(width) * height * channels, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.size() == 0; }
  Eigen::Index pixel_count() const { return Eigen::Index(width_) * height_; }

  Eigen::Index offset(int x, int y) const {
    return (Eigen::Index(y) * width_ + x) * channels_;
  }

  Scalar& operator()(int x, int y, int c = 0) { return data_[offset(x, y) + c]; }
  Scalar operator()(int x, int y, int c = 0) const { return data_[offset(x, y) + c]; }

  PixelMap pixel(int x, int y) { return PixelMap(data_.data() + offset(x, y), channels_); }
  ConstPixelMap pixel(int x, int y) const {
    return ConstPixelMap(data_.data() + offset(x, y), channels_);
  }

  std::span<const Scalar> values(int x, int y) const {
    return {data_.data() + offset(x, y), std::size_t(channels_)};
  }

  Storage& data() { return data_; }
  const Storage& data() const { return data_; }

  bool same_shape(const RasterImage& other) const {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }

  friend bool operator==(const RasterImage& a, const RasterImage& b) {
    return a.same_shape(b) && (a.data_ == b.data_).all();
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  Storage data_;
};

using ColorImage = RasterImage<std::uint8_t>;

template <typename Scalar>
bool in_bounds(const PixelCoord& p, const RasterImage<Scalar>& img) {
  return p.x() >= 0 && p.y() >= 0 && p.x() < img.width() && p.y() < img.height();
}

inline bool in_bounds(const PixelCoord& p, int width, int height) {
  return p.x() >= 0 && p.y() >= 0 && p.x() < width && p.y() < height;
}

inline PixelCoord clamp_to(const PixelCoord& p, int width, int height) {
  return {std::clamp(p.x(), 0, width - 1), std::clamp(p.y(), 0, height - 1)};
}

using GuideValues = Eigen::Matrix<float, Eigen::Dynamic, 1, 0, kMaxChannels, 1>;

/// One guidance sample: normalized channel values plus an optional hard label.
struct GuideVector {
  GuideValues values;
  std::optional<std::int32_t> label;
};

/// Weighted Euclidean distance over raw channel spans. The sum is accumulated
/// in channel order so every caller sees bit-identical results.
inline float weighted_distance(const float* a, const float* b, const float* weights,
                               int channels) {
  float sum = 0.0f;
  for (int c = 0; c < channels; ++c) {
    const float d = a[c] - b[c];
    sum += weights[c] * (d * d);
  }
  return std::sqrt(sum);
}

inline bool labels_conflict(const std::optional<std::int32_t>& a,
                            const std::optional<std::int32_t>& b) {
  return a && b && *a != *b;
}

template <typename DerivedW>
float guide_distance(const GuideVector& a, const GuideVector& b,
                     const Eigen::MatrixBase<DerivedW>& weights) {
  if (a.values.size() != b.values.size() || a.values.size() != weights.size())
    throw ContractViolation("guide_distance: channel count mismatch");
  if (labels_conflict(a.label, b.label)) return kInfiniteError;
  const Eigen::VectorXf w = weights.template cast<float>();
  if ((w.array() < 0.0f).any())
    throw ContractViolation("guide_distance: negative weight");
  return weighted_distance(a.values.data(), b.values.data(), w.data(),
                           int(a.values.size()));
}

}  // namespace chunkblit
