#pragma once

#include <filesystem>

#include "ailsr/image.hpp"

namespace ailsr {

// Decodes a PNG (8-bit gray/RGB/RGBA/palette) or binary PPM/PGM (P6/P5) file.
// Throws IoError naming the path on any failure.
Image8 load_image(const std::filesystem::path& path);

bool has_image_extension(const std::filesystem::path& path);

// 8-bit grayscale PNG.
void write_png_gray(const std::filesystem::path& path, const std::vector<std::uint8_t>& pixels,
                    int h, int w);

// Binary PPM (P6), used by the corpus generator and tests.
void write_ppm_rgb(const std::filesystem::path& path, const std::vector<std::uint8_t>& rgb, int h,
                   int w);

}  // namespace ailsr
