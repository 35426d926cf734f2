#include "chunkblit/guidance.hpp"

#include <algorithm>
#include <string>

namespace chunkblit {

GuideField::GuideField(RasterImage<float> r)
    : raster(std::move(r)), weights(Eigen::VectorXf::Ones(raster.channels())) {}

GuideField::GuideField(RasterImage<float> r, Eigen::VectorXf w)
    : raster(std::move(r)), weights(std::move(w)) {
  validate();
}

GuideVector GuideField::sample(const PixelCoord& p) const {
  GuideVector g;
  g.values = raster.pixel(p.x(), p.y()).matrix();
  g.label = label(p.x(), p.y());
  return g;
}

void GuideField::validate() const {
  if (raster.empty()) throw ContractViolation("guide field has no raster");
  if (weights.size() != raster.channels())
    throw ContractViolation("guide field: " + std::to_string(weights.size()) +
                            " weights for " + std::to_string(raster.channels()) + " channels");
  if ((weights.array() < 0.0f).any() || !weights.allFinite())
    throw ContractViolation("guide field: weights must be finite and non-negative");
  if (labels && (labels->width() != width() || labels->height() != height() ||
                 labels->channels() != 1))
    throw ContractViolation("guide field: label raster does not match guide dimensions");
  if (mask && (mask->width() != width() || mask->height() != height() || mask->channels() != 1))
    throw ContractViolation("guide field: mask does not match guide dimensions");
  for (int y = 0; y < height(); ++y)
    for (int x = 0; x < width(); ++x)
      if (masked_in(x, y) && !raster.pixel(x, y).allFinite())
        throw ContractViolation("guide field: non-finite value at a masked-in pixel");
}

std::size_t GuideField::masked_in_count() const {
  if (!mask) return std::size_t(raster.pixel_count());
  return std::size_t((mask->data() != 0).count());
}

void require_compatible(const GuideField& target, const GuideField& source) {
  if (target.channels() != source.channels())
    throw ContractViolation("target guide has " + std::to_string(target.channels()) +
                            " channels, source guide has " + std::to_string(source.channels()));
}

std::optional<Eigen::Vector2f> decode_normal(const Eigen::Vector3f& rgb) {
  Eigen::Vector3f n = 2.0f * rgb.array() - 1.0f;
  const float len = n.norm();
  if (n.z() < 0.0f || len <= 0.0f) return std::nullopt;
  n /= len;
  return Eigen::Vector2f((n.x() + 1.0f) * 0.5f, (n.y() + 1.0f) * 0.5f);
}

namespace {

float unit(std::uint8_t v) { return float(v) / 255.0f; }

void require_channels(const ColorImage& img, int at_least, const char* kind) {
  if (img.channels() < at_least)
    throw ContractViolation(std::string(kind) + " guide needs at least " +
                            std::to_string(at_least) + " channels, got " +
                            std::to_string(img.channels()));
}

}  // namespace

GuideField normal_guide(const ColorImage& rgb) {
  require_channels(rgb, 3, "normal");
  RasterImage<float> raster(rgb.width(), rgb.height(), 2);
  RasterImage<std::uint8_t> mask(rgb.width(), rgb.height(), 1, 1);
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      const Eigen::Vector3f texel(unit(rgb(x, y, 0)), unit(rgb(x, y, 1)), unit(rgb(x, y, 2)));
      if (auto g = decode_normal(texel)) {
        raster(x, y, 0) = g->x();
        raster(x, y, 1) = g->y();
      } else {
        // Back-facing: keep the raw xy so the value stays finite and roughly placed.
        raster(x, y, 0) = texel.x();
        raster(x, y, 1) = texel.y();
        mask(x, y) = 0;
      }
    }
  }
  GuideField field(std::move(raster));
  field.mask = std::move(mask);
  return field;
}

GuideField uv_guide(const ColorImage& rg) {
  require_channels(rg, 2, "uv");
  RasterImage<float> raster(rg.width(), rg.height(), 2);
  for (int y = 0; y < rg.height(); ++y)
    for (int x = 0; x < rg.width(); ++x) {
      raster(x, y, 0) = unit(rg(x, y, 0));
      raster(x, y, 1) = unit(rg(x, y, 1));
    }
  return GuideField(std::move(raster));
}

GuideField displacement_guide(const ColorImage& rg, int reference_width, int reference_height) {
  require_channels(rg, 2, "displacement");
  if (reference_width < 1 || reference_height < 1)
    throw ContractViolation("displacement guide: reference extent must be positive");
  const float sx = 1.0f / float(std::max(reference_width - 1, 1));
  const float sy = 1.0f / float(std::max(reference_height - 1, 1));
  RasterImage<float> raster(rg.width(), rg.height(), 2);
  for (int y = 0; y < rg.height(); ++y)
    for (int x = 0; x < rg.width(); ++x) {
      const int dx = int(rg(x, y, 0)) - 128;
      const int dy = int(rg(x, y, 1)) - 128;
      raster(x, y, 0) = std::clamp(float(x + dx) * sx, 0.0f, 1.0f);
      raster(x, y, 1) = std::clamp(float(y + dy) * sy, 0.0f, 1.0f);
    }
  return GuideField(std::move(raster));
}

GuideField segmentation_guide(const ColorImage& labels) {
  RasterImage<std::int32_t> ids(labels.width(), labels.height(), 1);
  const bool colour = labels.channels() >= 3;
  for (int y = 0; y < labels.height(); ++y)
    for (int x = 0; x < labels.width(); ++x)
      ids(x, y) = colour ? (std::int32_t(labels(x, y, 0)) << 16) |
                               (std::int32_t(labels(x, y, 1)) << 8) | labels(x, y, 2)
                         : std::int32_t(labels(x, y, 0));
  GuideField field(RasterImage<float>(labels.width(), labels.height(), 1),
                   Eigen::VectorXf::Zero(1));
  field.labels = std::move(ids);
  return field;
}

GuideField appearance_guide(const ColorImage& gray) {
  RasterImage<float> raster(gray.width(), gray.height(), 1);
  for (int y = 0; y < gray.height(); ++y)
    for (int x = 0; x < gray.width(); ++x) raster(x, y) = unit(gray(x, y, 0));
  return GuideField(std::move(raster));
}

GuideField uv_identity_guide(int width, int height) {
  RasterImage<float> raster(width, height, 2);
  const float sx = 1.0f / float(std::max(width - 1, 1));
  const float sy = 1.0f / float(std::max(height - 1, 1));
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      raster(x, y, 0) = float(x) * sx;
      raster(x, y, 1) = float(y) * sy;
    }
  return GuideField(std::move(raster));
}

GuideField with_uniform_weight(GuideField field, float weight) {
  field.weights = Eigen::VectorXf::Constant(field.channels(), weight);
  field.validate();
  return field;
}

GuideField compose_guides(std::span<const GuideField> parts) {
  if (parts.empty()) throw ContractViolation("compose_guides: no parts");
  const int w = parts.front().width();
  const int h = parts.front().height();
  int labeled = 0;
  for (const auto& part : parts) {
    part.validate();
    if (part.width() != w || part.height() != h)
      throw ContractViolation("compose_guides: parts differ in dimensions");
    if (part.labels) ++labeled;
  }
  if (labeled > 1) throw ContractViolation("compose_guides: more than one labeled part");
  if (parts.size() == 1) return parts.front();

  auto label_only = [&](const GuideField& part) {
    return part.labels && (part.weights.array() == 0.0f).all();
  };
  std::vector<const GuideField*> contributing;
  for (const auto& part : parts)
    if (!label_only(part)) contributing.push_back(&part);
  if (contributing.empty()) contributing.push_back(&parts.front());

  int channels = 0;
  for (const auto* part : contributing) channels += part->channels();
  if (channels > kMaxChannels)
    throw ContractViolation("compose_guides: more than 8 channels in total");

  GuideField out;
  out.raster = RasterImage<float>(w, h, channels);
  out.weights.resize(channels);
  int base = 0;
  for (const auto* part : contributing) {
    out.weights.segment(base, part->channels()) = part->weights;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        out.raster.pixel(x, y).segment(base, part->channels()) = part->raster.pixel(x, y);
    base += part->channels();
  }
  for (const auto& part : parts) {
    if (part.labels) out.labels = part.labels;
    if (part.mask) {
      if (!out.mask) {
        out.mask = part.mask;
      } else {
        out.mask->data() = out.mask->data().min(part.mask->data());
      }
    }
  }
  out.validate();
  return out;
}

}  // namespace chunkblit
