// Writes the bundled procedural assets as PNG files into a directory.
#include <cstdio>
#include <filesystem>
#include <string>

#include "chunkblit/assets.hpp"
#include "chunkblit/png_io.hpp"

namespace fs = std::filesystem;
using namespace chunkblit;

int main(int argc, char** argv) {
  const fs::path dir = argc > 1 ? argv[1] : "assets";
  const int size = argc > 2 ? std::stoi(argv[2]) : 256;
  fs::create_directories(dir);
  auto save = [&](const char* name, const ColorImage& img) {
    write_png((dir / name).string(), img);
    std::printf("wrote %s\n", (dir / name).string().c_str());
  };

  const auto sphere = assets::lit_sphere(size);
  save("sphere_style.png", sphere.style);
  save("sphere_normals.png", sphere.normals);
  save("torus_normals.png", assets::torus_normals(size, size));
  save("blob_normals.png", assets::blob_normals(size, size));
  save("flat_panel_normals.png", assets::flat_panel_normals(size, size));
  for (int i = 0; i < 10; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "torus_roll_%02d.png", i);
    save(name, assets::torus_normals(size, size, 0.05 * i));
  }

  const auto uv = assets::uv_unwrap_pair(size);
  save("uv_style.png", uv.style);
  save("uv_source.png", uv.source_uv);
  save("uv_target.png", uv.target_uv);
  save("uv_target_flipped.png", assets::flip_vertical(uv.target_uv));

  const auto disp = assets::displacement_pair(size);
  save("disp_style.png", disp.style);
  save("disp_source.png", disp.source_displacement);
  save("disp_target.png", disp.target_displacement);
  return 0;
}
