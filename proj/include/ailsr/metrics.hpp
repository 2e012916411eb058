#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ailsr/image.hpp"
#include "ailsr/importance.hpp"
#include "ailsr/model.hpp"

namespace ailsr {

// PSNR in dB on [0,1]-clamped predictions with peak 1.0, after shaving
// `shave` pixels from every border of both images. Zero MSE returns the
// 100 dB cap.
double psnr(const ImageY& y, const ImageY& y_hat, int shave);

// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), K1=0.01, K2=0.03,
// dynamic range 1.0, valid-window positions only (no padding), mean over
// positions. Images must be at least 11x11 after shaving.
double ssim(const ImageY& y, const ImageY& y_hat, int shave);

struct EvalResult {
  std::string dataset;
  int scale = 2;
  int shave = 2;
  struct Row {
    std::string id;
    double psnr = 0.0;
    double ssim = 0.0;
  };
  std::vector<Row> rows;
  double mean_psnr = 0.0;
  double mean_ssim = 0.0;
};

// Full-image protocol: per HR image, synthesize the pre-upsampled LR input,
// run the network, clamp to [0,1], shave `scale` pixels and compute both
// metrics. `threads` > 1 fans inference out across images; rows are always
// merged in id order so results do not depend on the thread count.
EvalResult evaluate(const Network& net, const std::vector<std::pair<std::string, ImageY>>& images,
                    int scale, const std::string& dataset_name = "", int threads = 1);

// 8-bit grayscale export, linear 0 -> 0, 1 -> 255 (round half up).
void export_importance_png(const ImportanceMap& map, const std::filesystem::path& path);

void write_report_csv(const EvalResult& result, const std::string& config_hash,
                      const std::filesystem::path& path);
void write_report_json(const EvalResult& result, const std::string& config_hash,
                       const std::filesystem::path& path);

struct LoadedReport {
  EvalResult result;
  std::string config_hash;
};
LoadedReport load_report_json(const std::filesystem::path& path);

}  // namespace ailsr
