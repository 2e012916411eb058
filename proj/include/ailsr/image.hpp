#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ailsr/errors.hpp"

namespace ailsr {

// Luminance plane, values in [0,1].
struct ImageY {
  int h = 0, w = 0;
  std::vector<double> v;  // row-major, length h*w

  ImageY() = default;
  ImageY(int h_, int w_) : h(h_), w(w_), v(static_cast<std::size_t>(h_) * w_, 0.0) {
    if (h_ < 1 || w_ < 1) throw ShapeError("image dimensions must be >= 1");
  }

  double& at(int y, int x) { return v[static_cast<std::size_t>(y) * w + x]; }
  double at(int y, int x) const { return v[static_cast<std::size_t>(y) * w + x]; }
};

// 8-bit interleaved image as decoded from disk.
struct Image8 {
  int h = 0, w = 0, channels = 0;  // 1 (gray) or 3 (RGB)
  std::vector<std::uint8_t> data;  // row-major, interleaved
};

// ITU-R BT.601 luma from 8-bit RGB, normalized to [0,1]:
//   Y = (16 + 65.481 R + 128.553 G + 24.966 B) / 255   with R,G,B in [0,1].
// Single-channel inputs pass through as v/255.
ImageY rgb_to_y(const Image8& img);

// Separable cubic convolution resampling (Keys kernel, a = -0.5) with
// edge-clamped sampling and pixel-center coordinate mapping. The output is
// clamped to [0,1]; no other stage of the pipeline clamps.
ImageY bicubic_resize_to(const ImageY& img, int out_h, int out_w);

// Target dims are max(1, round(dim * factor)).
ImageY bicubic_resize(const ImageY& img, double factor);

ImageY rotate90(const ImageY& img, int quarter_turns);  // counter-clockwise
ImageY flip_horizontal(const ImageY& img);
ImageY center_crop(const ImageY& img, int h, int w);

}  // namespace ailsr
