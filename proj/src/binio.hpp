// Little-endian byte-level encode/decode shared by the cache and model
// file formats, plus atomic whole-file writes.
#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tlc/error.hpp"

namespace tlc::binio {

inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

inline void put_f32(std::string& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

class Reader {
 public:
  Reader(const std::string& data, std::string origin, ErrorKind error_kind)
      : data_(data), origin_(std::move(origin)), error_kind_(error_kind) {}

  std::uint16_t u16() {
    need(2);
    const auto* p = bytes();
    const auto v = static_cast<std::uint16_t>(
        static_cast<std::uint16_t>(p[0]) |
        (static_cast<std::uint16_t>(p[1]) << 8));
    pos_ += 2;
    return v;
  }

  std::uint32_t u32() {
    need(4);
    const auto* p = bytes();
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    pos_ += 4;
    return v;
  }

  std::uint64_t u64() {
    need(8);
    const auto* p = bytes();
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    pos_ += 8;
    return v;
  }

  float f32() { return std::bit_cast<float>(u32()); }

  std::string str(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool at_end() const { return pos_ == data_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(error_kind_, origin_ + ": " + what);
  }

 private:
  const unsigned char* bytes() const {
    return reinterpret_cast<const unsigned char*>(data_.data()) + pos_;
  }
  void need(std::size_t n) {
    if (pos_ + n > data_.size()) fail("truncated file");
  }
  const std::string& data_;
  std::string origin_;
  ErrorKind error_kind_;
  std::size_t pos_ = 0;
};

inline void write_file_atomic(const std::string& bytes,
                              const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::kIo, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path,
                             ErrorKind error_kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(error_kind, "cannot open file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace tlc::binio
