#include "chunkblit/png_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include <png.h>

namespace chunkblit {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

FileHandle open_file(const std::string& path, const char* mode) {
  FileHandle f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path);
  return f;
}

[[noreturn]] void on_png_error(png_structp png, png_const_charp) { png_longjmp(png, 1); }
void on_png_warning(png_structp, png_const_charp) {}

template <typename Scalar>
RasterImage<Scalar> read_any(const std::string& path) {
  FileHandle f = open_file(path, "rb");
  png_byte header[8];
  if (std::fread(header, 1, 8, f.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
    throw IoError("not a PNG file: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, on_png_error, on_png_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng initialisation failed for " + path);
  }
  RasterImage<Scalar> image;
  std::vector<png_bytep> rows;
  std::vector<png_byte> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("corrupt PNG data in " + path);
  }
  png_init_io(png, f.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int colour = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (colour == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (colour == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  constexpr bool wide = sizeof(Scalar) == 2;
  if (!wide && depth == 16) png_set_strip_16(png);
  if (wide && depth < 16) png_set_expand_16(png);
  if (wide) png_set_swap(png);  // host little-endian rows
  png_read_update_info(png, info);

  const int width = int(png_get_image_width(png, info));
  const int height = int(png_get_image_height(png, info));
  const int channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  buffer.resize(stride * height);
  rows.resize(height);
  for (int y = 0; y < height; ++y) rows[y] = buffer.data() + stride * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  image = RasterImage<Scalar>(width, height, channels);
  std::memcpy(image.data().data(), buffer.data(), buffer.size());
  return image;
}

template <typename Scalar>
void write_any(const std::string& path, const RasterImage<Scalar>& image) {
  if (image.empty()) throw IoError("refusing to write an empty image to " + path);
  static constexpr int kColourTypes[] = {PNG_COLOR_TYPE_GRAY, PNG_COLOR_TYPE_GRAY_ALPHA,
                                         PNG_COLOR_TYPE_RGB, PNG_COLOR_TYPE_RGB_ALPHA};
  if (image.channels() > 4) throw IoError("PNG supports at most 4 channels: " + path);
  FileHandle f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, on_png_error, on_png_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng initialisation failed for " + path);
  }
  std::vector<png_bytep> rows(image.height());
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing " + path);
  }
  png_init_io(png, f.get());
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, png_uint_32(image.width()), png_uint_32(image.height()),
               int(sizeof(Scalar) * 8), kColourTypes[image.channels() - 1], PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if constexpr (sizeof(Scalar) == 2) png_set_swap(png);
  auto* base = reinterpret_cast<png_bytep>(const_cast<Scalar*>(image.data().data()));
  const std::size_t stride = std::size_t(image.width()) * image.channels() * sizeof(Scalar);
  for (int y = 0; y < image.height(); ++y) rows[y] = base + stride * y;
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(f.get()) != 0) throw IoError("failed writing " + path);
}

}  // namespace

ColorImage read_png(const std::string& path) { return read_any<std::uint8_t>(path); }
RasterImage<std::uint16_t> read_png16(const std::string& path) { return read_any<std::uint16_t>(path); }

void write_png(const std::string& path, const ColorImage& image) { write_any(path, image); }
void write_png(const std::string& path, const RasterImage<std::uint16_t>& image) {
  write_any(path, image);
}

RasterImage<std::uint16_t> encode_coords(const CoordField& coords) {
  RasterImage<std::uint16_t> out(coords.width(), coords.height(), 3);
  for (int y = 0; y < coords.height(); ++y)
    for (int x = 0; x < coords.width(); ++x) {
      const CoordEntry& e = coords(x, y);
      if (e.src.x() < 0 || e.src.y() < 0 || e.src.x() > 0xffff || e.src.y() > 0xffff ||
          e.level < 0 || e.level > 0x7fff)
        throw ContractViolation("coordinate field entry does not fit the 16-bit encoding");
      out(x, y, 0) = std::uint16_t(e.src.x());
      out(x, y, 1) = std::uint16_t(e.src.y());
      out(x, y, 2) = std::uint16_t(e.level | (e.miss ? 0x8000 : 0));
    }
  return out;
}

CoordField decode_coords(const RasterImage<std::uint16_t>& image) {
  if (image.channels() != 3) throw IoError("coordinate image must have 3 channels");
  CoordField out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x) {
      const std::uint16_t tag = image(x, y, 2);
      out(x, y) = {PixelCoord(image(x, y, 0), image(x, y, 1)), tag & 0x7fff, (tag & 0x8000) != 0};
    }
  return out;
}

}  // namespace chunkblit
