#pragma once

#include <cstdint>

#include "chunkblit/core.hpp"

/// Procedurally generated test and demo assets. Every generator is a pure
/// function of its arguments.
namespace chunkblit::assets {

/// Normal vector (camera space, +z towards the viewer) to an 8-bit RGB texel.
Eigen::Matrix<std::uint8_t, 3, 1> encode_normal(const Eigen::Vector3d& n);

/// Hand-painted-looking stochastic texture.
ColorImage painted_texture(int width, int height, std::uint64_t seed);

struct LitSphere {
  ColorImage style;    // painted sphere on paper
  ColorImage normals;  // RGB normal pass; outside the disk encodes a back-facing normal
};

LitSphere lit_sphere(int size, std::uint64_t seed = 7);

/// Torus seen along its axis, normals optionally rotated about the view axis.
ColorImage torus_normals(int width, int height, double roll_radians = 0.0);
/// Smooth height-field bumps covering the whole frame.
ColorImage blob_normals(int width, int height);
/// Left half a single constant normal, right half blob normals.
ColorImage flat_panel_normals(int width, int height);

struct UvPair {
  ColorImage style;
  ColorImage source_uv;  // identity unwrap
  ColorImage target_uv;  // smoothly warped unwrap
};
UvPair uv_unwrap_pair(int size, std::uint64_t seed = 11);

struct DisplacementPair {
  ColorImage style;
  ColorImage source_displacement;  // zero offsets (value 128)
  ColorImage target_displacement;  // smooth offsets within +-6 px
};
DisplacementPair displacement_pair(int size, std::uint64_t seed = 13);

/// Rows reversed.
ColorImage flip_vertical(const ColorImage& image);

}  // namespace chunkblit::assets
