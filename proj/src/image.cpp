#include "ailsr/image.hpp"

#include <algorithm>
#include <cmath>

namespace ailsr {

ImageY rgb_to_y(const Image8& img) {
  if (img.channels != 1 && img.channels != 3) {
    throw Error("rgb_to_y: unsupported channel count " + std::to_string(img.channels));
  }
  ImageY out(img.h, img.w);
  const std::size_t pixels = static_cast<std::size_t>(img.h) * img.w;
  if (img.channels == 1) {
    for (std::size_t i = 0; i < pixels; ++i) out.v[i] = img.data[i] / 255.0;
    return out;
  }
  for (std::size_t i = 0; i < pixels; ++i) {
    const double r = img.data[3 * i + 0] / 255.0;
    const double g = img.data[3 * i + 1] / 255.0;
    const double b = img.data[3 * i + 2] / 255.0;
    out.v[i] = (16.0 + 65.481 * r + 128.553 * g + 24.966 * b) / 255.0;
  }
  return out;
}

namespace {

// Keys cubic convolution kernel, a = -0.5 (Catmull-Rom).
double cubic_weight(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

// One separable pass along the x axis: (h, in_w) -> (h, out_w).
std::vector<double> resample_rows(const std::vector<double>& src, int h, int in_w, int out_w) {
  std::vector<double> dst(static_cast<std::size_t>(h) * out_w);
  const double scale = static_cast<double>(in_w) / out_w;
  for (int ox = 0; ox < out_w; ++ox) {
    const double sx = (ox + 0.5) * scale - 0.5;
    const int base = static_cast<int>(std::floor(sx));
    double wts[4];
    int idx[4];
    for (int k = 0; k < 4; ++k) {
      const int tap = base - 1 + k;
      wts[k] = cubic_weight(sx - tap);
      idx[k] = std::clamp(tap, 0, in_w - 1);
    }
    for (int y = 0; y < h; ++y) {
      const double* row = src.data() + static_cast<std::size_t>(y) * in_w;
      dst[static_cast<std::size_t>(y) * out_w + ox] =
          wts[0] * row[idx[0]] + wts[1] * row[idx[1]] + wts[2] * row[idx[2]] + wts[3] * row[idx[3]];
    }
  }
  return dst;
}

std::vector<double> transpose(const std::vector<double>& src, int h, int w) {
  std::vector<double> dst(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      dst[static_cast<std::size_t>(x) * h + y] = src[static_cast<std::size_t>(y) * w + x];
    }
  }
  return dst;
}

}  // namespace

ImageY bicubic_resize_to(const ImageY& img, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) {
    throw ShapeError("bicubic_resize: degenerate target size " + std::to_string(out_h) + "x" +
                     std::to_string(out_w));
  }
  std::vector<double> horiz = resample_rows(img.v, img.h, img.w, out_w);
  std::vector<double> t = transpose(horiz, img.h, out_w);
  std::vector<double> vert = resample_rows(t, out_w, img.h, out_h);
  ImageY out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      out.at(y, x) = std::clamp(vert[static_cast<std::size_t>(x) * out_h + y], 0.0, 1.0);
    }
  }
  return out;
}

ImageY bicubic_resize(const ImageY& img, double factor) {
  const int out_h = std::max(1, static_cast<int>(std::llround(img.h * factor)));
  const int out_w = std::max(1, static_cast<int>(std::llround(img.w * factor)));
  return bicubic_resize_to(img, out_h, out_w);
}

ImageY rotate90(const ImageY& img, int quarter_turns) {
  int q = ((quarter_turns % 4) + 4) % 4;
  if (q == 0) return img;
  ImageY out = q == 2 ? ImageY(img.h, img.w) : ImageY(img.w, img.h);
  for (int y = 0; y < img.h; ++y) {
    for (int x = 0; x < img.w; ++x) {
      const double v = img.at(y, x);
      if (q == 1) {
        out.at(img.w - 1 - x, y) = v;
      } else if (q == 2) {
        out.at(img.h - 1 - y, img.w - 1 - x) = v;
      } else {
        out.at(x, img.h - 1 - y) = v;
      }
    }
  }
  return out;
}

ImageY flip_horizontal(const ImageY& img) {
  ImageY out(img.h, img.w);
  for (int y = 0; y < img.h; ++y) {
    for (int x = 0; x < img.w; ++x) out.at(y, img.w - 1 - x) = img.at(y, x);
  }
  return out;
}

ImageY center_crop(const ImageY& img, int h, int w) {
  if (h > img.h || w > img.w || h < 1 || w < 1) {
    throw ShapeError("center_crop: " + std::to_string(h) + "x" + std::to_string(w) +
                     " from " + std::to_string(img.h) + "x" + std::to_string(img.w));
  }
  const int y0 = (img.h - h) / 2;
  const int x0 = (img.w - w) / 2;
  ImageY out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.at(y, x) = img.at(y0 + y, x0 + x);
  }
  return out;
}

}  // namespace ailsr
