#include "tlc/image.hpp"

#include <fstream>
#include <string>

#include "tlc/error.hpp"

namespace tlc::image {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

}  // namespace

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kExtraction,
                "cannot open image file: " + path.string());
  }
  if (next_token(in) != "P6") {
    throw Error(ErrorKind::kExtraction,
                path.string() + ": not a binary PPM (P6) file");
  }
  Image img;
  try {
    img.width = std::stoi(next_token(in));
    img.height = std::stoi(next_token(in));
    const int maxval = std::stoi(next_token(in));
    if (maxval != 255) {
      throw Error(ErrorKind::kExtraction,
                  path.string() + ": only maxval 255 is supported");
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorKind::kExtraction, path.string() + ": malformed header");
  }
  if (img.width <= 0 || img.height <= 0) {
    throw Error(ErrorKind::kExtraction, path.string() + ": bad dimensions");
  }
  img.channels = 3;
  const std::size_t n = static_cast<std::size_t>(img.width) *
                        static_cast<std::size_t>(img.height) * 3;
  img.pixels.resize(n);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw Error(ErrorKind::kExtraction,
                path.string() + ": truncated pixel data");
  }
  return img;
}

void write_ppm(const Image& img, const std::filesystem::path& path) {
  if (img.channels != 3) {
    throw Error(ErrorKind::kIo, "write_ppm requires a 3-channel image");
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace tlc::image
