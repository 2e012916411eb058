#include "ailsr/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <memory>

#include "ailsr/serial.hpp"

namespace ailsr {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image8 load_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng init failed for " + path.string());
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng init failed for " + path.string());
  }
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("failed to decode PNG " + path.string());
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);

  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path.string() + ": unsupported PNG layout (" + std::to_string(channels) +
                  " channels after expansion)");
  }

  Image8 img;
  img.h = static_cast<int>(h);
  img.w = static_cast<int>(w);
  img.channels = channels;
  img.data.resize(static_cast<std::size_t>(h) * w * channels);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) {
    rows[y] = img.data.data() + static_cast<std::size_t>(y) * w * channels;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

// PNM header tokens separated by whitespace; '#' starts a comment to EOL.
class PnmHeader {
 public:
  PnmHeader(const std::string& data, const std::string& name) : data_(data), name_(name) {}

  std::string token() {
    for (;;) {
      while (pos_ < data_.size() && std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
      if (pos_ < data_.size() && data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    std::size_t start = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
    if (start == pos_) throw IoError(name_ + ": truncated PNM header");
    return data_.substr(start, pos_ - start);
  }

  int number() {
    const std::string t = token();
    try {
      return std::stoi(t);
    } catch (...) {
      throw IoError(name_ + ": bad PNM header token '" + t + "'");
    }
  }

  // Position of the first payload byte (one whitespace after the maxval).
  std::size_t payload_offset() const { return pos_ + 1; }

 private:
  const std::string& data_;
  std::string name_;
  std::size_t pos_ = 0;
};

Image8 load_pnm(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  const std::string name = path.string();
  PnmHeader header(data, name);
  const std::string magic = header.token();
  int channels = 0;
  if (magic == "P6") {
    channels = 3;
  } else if (magic == "P5") {
    channels = 1;
  } else {
    throw IoError(name + ": unsupported PNM magic '" + magic + "' (binary P5/P6 only)");
  }
  const int w = header.number();
  const int h = header.number();
  const int maxval = header.number();
  if (w < 1 || h < 1) throw IoError(name + ": bad PNM dimensions");
  if (maxval != 255) throw IoError(name + ": only maxval 255 PNM files are supported");
  const std::size_t need = static_cast<std::size_t>(w) * h * channels;
  if (header.payload_offset() + need > data.size()) {
    throw IoError(name + ": truncated PNM payload");
  }
  Image8 img;
  img.h = h;
  img.w = w;
  img.channels = channels;
  img.data.assign(data.begin() + static_cast<std::ptrdiff_t>(header.payload_offset()),
                  data.begin() + static_cast<std::ptrdiff_t>(header.payload_offset() + need));
  return img;
}

}  // namespace

Image8 load_image(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".png") return load_png(path);
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return load_pnm(path);
  throw IoError(path.string() + ": unsupported image format '" + ext + "' (png/ppm/pgm)");
}

bool has_image_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

void write_png_gray(const std::filesystem::path& path, const std::vector<std::uint8_t>& pixels,
                    int h, int w) {
  if (static_cast<std::size_t>(h) * w != pixels.size()) {
    throw ShapeError("write_png_gray: pixel buffer does not match " + std::to_string(h) + "x" +
                     std::to_string(w));
  }
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw IoError("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng init failed for " + path.string());
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng init failed for " + path.string());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed to encode PNG " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < h; ++y) {
    png_write_row(png, const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * w));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_ppm_rgb(const std::filesystem::path& path, const std::vector<std::uint8_t>& rgb, int h,
                   int w) {
  if (static_cast<std::size_t>(h) * w * 3 != rgb.size()) {
    throw ShapeError("write_ppm_rgb: pixel buffer does not match " + std::to_string(h) + "x" +
                     std::to_string(w));
  }
  std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
  write_file(path, out);
}

}  // namespace ailsr
