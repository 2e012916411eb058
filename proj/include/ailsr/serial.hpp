#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "ailsr/errors.hpp"

namespace ailsr {

// All on-disk binary payloads are little-endian regardless of host order.
void put_u32(std::string& out, std::uint32_t v);
void put_u64(std::string& out, std::uint64_t v);
void put_f64(std::string& out, double v);
void put_f64_array(std::string& out, std::span<const double> v);
void put_bytes(std::string& out, std::string_view bytes);

// Bounds-checked sequential reader; any overrun throws CorruptFileError
// mentioning `what` (typically the file path).
class Cursor {
 public:
  Cursor(std::string_view buf, std::string_view what) : buf_(buf), what_(what) {}

  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  void f64_array(std::span<double> out);
  std::string bytes(std::size_t count);

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return buf_.size() - pos_; }
  void expect_end() const;

 private:
  const char* take(std::size_t count);

  std::string_view buf_;
  std::string_view what_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::string_view bytes);

// FNV-1a, used for config content hashes (not an integrity checksum).
std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace ailsr
