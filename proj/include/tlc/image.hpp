// Minimal raster type plus binary PPM (P6) I/O, enough to feed the
// built-in extractor and to generate synthetic fixtures.
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace tlc::image {

struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;  // row-major, channel-interleaved

  std::uint8_t at(int r, int c, int ch) const {
    return pixels[static_cast<std::size_t>((r * width + c) * channels + ch)];
  }
};

Image read_ppm(const std::filesystem::path& path);
void write_ppm(const Image& img, const std::filesystem::path& path);

}  // namespace tlc::image
