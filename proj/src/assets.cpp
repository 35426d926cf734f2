#include "chunkblit/assets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chunkblit/seeds.hpp"

namespace chunkblit::assets {

namespace {

double lattice(std::int64_t x, std::int64_t y, std::uint64_t seed) {
  const std::uint64_t h = mix64(mix64(seed ^ std::uint64_t(x)) ^ (std::uint64_t(y) << 21));
  return double(h >> 11) * 0x1.0p-53;
}

double smooth_noise(double x, double y, std::uint64_t seed) {
  const double fx = std::floor(x), fy = std::floor(y);
  const auto ix = std::int64_t(fx), iy = std::int64_t(fy);
  const double tx = x - fx, ty = y - fy;
  const double sx = tx * tx * (3 - 2 * tx), sy = ty * ty * (3 - 2 * ty);
  const double a = lattice(ix, iy, seed), b = lattice(ix + 1, iy, seed);
  const double c = lattice(ix, iy + 1, seed), d = lattice(ix + 1, iy + 1, seed);
  return (a + (b - a) * sx) * (1 - sy) + (c + (d - c) * sx) * sy;
}

double fbm(double x, double y, std::uint64_t seed, int octaves = 4) {
  double sum = 0, amp = 0.5, norm = 0;
  for (int i = 0; i < octaves; ++i) {
    sum += amp * smooth_noise(x, y, seed + std::uint64_t(i) * 101);
    norm += amp;
    x *= 2.03;
    y *= 2.03;
    amp *= 0.5;
  }
  return sum / norm;
}

// Elongated noise sampled along a direction that itself wanders.
double strokes(double x, double y, double scale, std::uint64_t seed) {
  const double angle = fbm(x / (scale * 6), y / (scale * 6), seed ^ 0x55) * 2 * std::numbers::pi;
  const double c = std::cos(angle), s = std::sin(angle);
  const double u = (c * x + s * y) / (scale * 4.0);
  const double v = (-s * x + c * y) / scale;
  return fbm(u, v, seed, 3);
}

std::uint8_t to_byte(double v) { return std::uint8_t(std::clamp(std::lround(v * 255.0), 0L, 255L)); }

Eigen::Vector3d ramp(double t, const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                     const Eigen::Vector3d& c) {
  t = std::clamp(t, 0.0, 1.0);
  return t < 0.5 ? a + (b - a) * (t * 2) : b + (c - b) * (t * 2 - 1);
}

void put(ColorImage& img, int x, int y, const Eigen::Vector3d& rgb) {
  for (int k = 0; k < 3; ++k) img(x, y, k) = to_byte(rgb[k]);
}

void put_normal(ColorImage& img, int x, int y, const Eigen::Vector3d& n) {
  const auto t = encode_normal(n);
  for (int k = 0; k < 3; ++k) img(x, y, k) = t[k];
}

const Eigen::Vector3d kBackFacing(0.0, 0.0, -1.0);

}  // namespace

Eigen::Matrix<std::uint8_t, 3, 1> encode_normal(const Eigen::Vector3d& n) {
  Eigen::Matrix<std::uint8_t, 3, 1> out;
  for (int k = 0; k < 3; ++k) out[k] = to_byte((n[k] + 1.0) * 0.5);
  return out;
}

ColorImage painted_texture(int width, int height, std::uint64_t seed) {
  ColorImage img(width, height, 3);
  const Eigen::Vector3d ink(0.18, 0.22, 0.38), mid(0.78, 0.46, 0.28), light(0.96, 0.88, 0.70);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double base = fbm(x / 23.0, y / 23.0, seed);
      const double detail = strokes(x, y, 3.0, seed + 1);
      put(img, x, y, ramp(0.65 * base + 0.45 * detail - 0.05, ink, mid, light));
    }
  return img;
}

LitSphere lit_sphere(int size, std::uint64_t seed) {
  LitSphere out{ColorImage(size, size, 3), ColorImage(size, size, 3)};
  const double radius = 0.5 * size - 1.0;
  const double cx = 0.5 * (size - 1), cy = 0.5 * (size - 1);
  const Eigen::Vector3d to_light = Eigen::Vector3d(-0.45, -0.55, 0.70).normalized();
  const Eigen::Vector3d shadow(0.14, 0.16, 0.34), body(0.80, 0.42, 0.26), highlight(0.99, 0.93, 0.74);
  const Eigen::Vector3d paper(0.95, 0.93, 0.87);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double nx = (x - cx) / radius, ny = (y - cy) / radius;
      const double rr = nx * nx + ny * ny;
      const double grain = strokes(x, y, 2.5, seed);
      if (rr >= 1.0) {
        put(out.style, x, y, paper - Eigen::Vector3d::Constant(0.06 * grain));
        put_normal(out.normals, x, y, kBackFacing);
        continue;
      }
      const Eigen::Vector3d n(nx, ny, std::sqrt(1.0 - rr));
      const double shade = std::max(0.0, n.dot(to_light));
      const double t = shade + 0.35 * (grain - 0.5) + 0.12 * (fbm(x / 9.0, y / 9.0, seed + 3) - 0.5);
      put(out.style, x, y, ramp(t, shadow, body, highlight));
      put_normal(out.normals, x, y, n);
    }
  return out;
}

ColorImage torus_normals(int width, int height, double roll_radians) {
  ColorImage img(width, height, 3);
  const double cx = 0.5 * (width - 1), cy = 0.5 * (height - 1);
  const double outer = 0.48 * std::min(width, height);
  const double tube = 0.40 * outer;
  const double major = outer - tube;
  const double c = std::cos(roll_radians), s = std::sin(roll_radians);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double dx = x - cx, dy = y - cy;
      const double rho = std::hypot(dx, dy);
      const double radial = rho - major;
      if (std::abs(radial) >= tube || rho == 0.0) {
        put_normal(img, x, y, kBackFacing);
        continue;
      }
      const double z = std::sqrt(tube * tube - radial * radial);
      Eigen::Vector3d n(radial * dx / rho, radial * dy / rho, z);
      n.normalize();
      const Eigen::Vector3d rolled(c * n.x() - s * n.y(), s * n.x() + c * n.y(), n.z());
      put_normal(img, x, y, rolled);
    }
  return img;
}

ColorImage blob_normals(int width, int height) {
  ColorImage img(width, height, 3);
  struct Bump {
    double x, y, r, h;
  };
  const Bump bumps[] = {{0.30, 0.35, 0.22, 1.0}, {0.70, 0.30, 0.18, 0.8}, {0.55, 0.72, 0.26, 1.1},
                        {0.18, 0.78, 0.15, 0.6}, {0.85, 0.80, 0.14, 0.7}};
  const double scale = std::min(width, height);
  auto height_at = [&](double x, double y) {
    double z = 0;
    for (const auto& b : bumps) {
      const double dx = x - b.x * width, dy = y - b.y * height, r = b.r * scale;
      z += b.h * r * std::exp(-(dx * dx + dy * dy) / (r * r));
    }
    return z;
  };
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double gx = (height_at(x + 0.5, y) - height_at(x - 0.5, y));
      const double gy = (height_at(x, y + 0.5) - height_at(x, y - 0.5));
      put_normal(img, x, y, Eigen::Vector3d(-gx, -gy, 1.0).normalized());
    }
  return img;
}

ColorImage flat_panel_normals(int width, int height) {
  ColorImage img = blob_normals(width, height);
  const Eigen::Vector3d flat = Eigen::Vector3d(0.25, -0.20, 0.95).normalized();
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width / 2; ++x) put_normal(img, x, y, flat);
  return img;
}

UvPair uv_unwrap_pair(int size, std::uint64_t seed) {
  UvPair out{painted_texture(size, size, seed), ColorImage(size, size, 3),
             ColorImage(size, size, 3)};
  const double n = std::max(size - 1, 1);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double u = x / n, v = y / n;
      out.source_uv(x, y, 0) = to_byte(u);
      out.source_uv(x, y, 1) = to_byte(v);
      // Gentle swirl plus a slight scale change.
      const double du = 0.04 * std::sin(2 * std::numbers::pi * v) + 0.05 * (u - 0.5);
      const double dv = 0.04 * std::sin(2 * std::numbers::pi * u * 1.5) - 0.03 * (v - 0.5);
      out.target_uv(x, y, 0) = to_byte(u + du);
      out.target_uv(x, y, 1) = to_byte(v + dv);
    }
  return out;
}

DisplacementPair displacement_pair(int size, std::uint64_t seed) {
  DisplacementPair out{painted_texture(size, size, seed), ColorImage(size, size, 3, 128),
                       ColorImage(size, size, 3, 128)};
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double a = 2 * std::numbers::pi * x / size, b = 2 * std::numbers::pi * y / size;
      const double dx = 6.0 * std::sin(b) * std::cos(0.5 * a);
      const double dy = 5.0 * std::sin(a + 0.3);
      out.target_displacement(x, y, 0) = std::uint8_t(128 + std::lround(dx));
      out.target_displacement(x, y, 1) = std::uint8_t(128 + std::lround(dy));
    }
  return out;
}

ColorImage flip_vertical(const ColorImage& image) {
  ColorImage out(image.width(), image.height(), image.channels());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      out.pixel(x, image.height() - 1 - y) = image.pixel(x, y);
  return out;
}

}  // namespace chunkblit::assets
