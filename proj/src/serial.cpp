#include "ailsr/serial.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>

namespace ailsr {

namespace {

void put_le(std::string& out, std::uint64_t v, int nbytes) {
  for (int i = 0; i < nbytes; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

std::uint64_t get_le(const char* p, int nbytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < nbytes; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return v;
}

}  // namespace

void put_u32(std::string& out, std::uint32_t v) { put_le(out, v, 4); }
void put_u64(std::string& out, std::uint64_t v) { put_le(out, v, 8); }

void put_f64(std::string& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v), 8); }

void put_f64_array(std::string& out, std::span<const double> v) {
  out.reserve(out.size() + v.size() * 8);
  for (double x : v) put_f64(out, x);
}

void put_bytes(std::string& out, std::string_view bytes) { out.append(bytes); }

const char* Cursor::take(std::size_t count) {
  if (count > remaining()) {
    throw CorruptFileError(std::string(what_) + ": truncated (need " + std::to_string(count) +
                           " bytes at offset " + std::to_string(pos_) + ", have " +
                           std::to_string(remaining()) + ")");
  }
  const char* p = buf_.data() + pos_;
  pos_ += count;
  return p;
}

std::uint32_t Cursor::u32() { return static_cast<std::uint32_t>(get_le(take(4), 4)); }
std::uint64_t Cursor::u64() { return get_le(take(8), 8); }

double Cursor::f64() { return std::bit_cast<double>(get_le(take(8), 8)); }

void Cursor::f64_array(std::span<double> out) {
  const char* p = take(out.size() * 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::bit_cast<double>(get_le(p + 8 * i, 8));
  }
}

std::string Cursor::bytes(std::size_t count) {
  const char* p = take(count);
  return std::string(p, count);
}

void Cursor::expect_end() const {
  if (pos_ != buf_.size()) {
    throw CorruptFileError(std::string(what_) + ": " + std::to_string(buf_.size() - pos_) +
                           " unexpected trailing bytes");
  }
}

std::uint32_t crc32_of(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  return data;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace ailsr
