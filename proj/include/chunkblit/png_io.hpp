#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "chunkblit/core.hpp"
#include "chunkblit/synth.hpp"

namespace chunkblit {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads a PNG as 8-bit samples. Palette images expand to RGB; 16-bit
/// samples keep their high byte. Channel count follows the file (1-4).
ColorImage read_png(const std::string& path);
RasterImage<std::uint16_t> read_png16(const std::string& path);

void write_png(const std::string& path, const ColorImage& image);
void write_png(const std::string& path, const RasterImage<std::uint16_t>& image);

/// 16-bit RGB encoding of a coordinate field: R = src.x, G = src.y,
/// B = level | (miss << 15).
RasterImage<std::uint16_t> encode_coords(const CoordField& coords);
CoordField decode_coords(const RasterImage<std::uint16_t>& image);

}  // namespace chunkblit
