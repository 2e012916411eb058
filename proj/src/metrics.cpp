#include "ailsr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "ailsr/image_io.hpp"
#include "ailsr/serial.hpp"

namespace ailsr {

namespace {

void check_metric_inputs(const ImageY& y, const ImageY& y_hat, int shave, const char* what) {
  if (y.h != y_hat.h || y.w != y_hat.w) {
    throw ShapeError(std::string(what) + ": image shapes differ (" + std::to_string(y.h) + "x" +
                     std::to_string(y.w) + " vs " + std::to_string(y_hat.h) + "x" +
                     std::to_string(y_hat.w) + ")");
  }
  if (shave < 0 || 2 * shave >= std::min(y.h, y.w)) {
    throw DomainError(std::string(what) + ": shave " + std::to_string(shave) +
                      " too large for image " + std::to_string(y.h) + "x" + std::to_string(y.w));
  }
}

}  // namespace

double psnr(const ImageY& y, const ImageY& y_hat, int shave) {
  check_metric_inputs(y, y_hat, shave, "psnr");
  double sum = 0.0;
  std::size_t count = 0;
  for (int r = shave; r < y.h - shave; ++r) {
    for (int c = shave; c < y.w - shave; ++c) {
      const double a = y.at(r, c);
      const double b = std::clamp(y_hat.at(r, c), 0.0, 1.0);
      sum += (a - b) * (a - b);
      ++count;
    }
  }
  const double mse = sum / static_cast<double>(count);
  if (mse == 0.0) return 100.0;
  return 10.0 * std::log10(1.0 / mse);
}

namespace {

constexpr int kSsimWindow = 11;

const std::vector<double>& ssim_window() {
  static const std::vector<double> window = [] {
    std::vector<double> w(kSsimWindow * kSsimWindow);
    const double sigma = 1.5;
    double sum = 0.0;
    for (int y = 0; y < kSsimWindow; ++y) {
      for (int x = 0; x < kSsimWindow; ++x) {
        const double dy = y - (kSsimWindow - 1) / 2.0;
        const double dx = x - (kSsimWindow - 1) / 2.0;
        const double g = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        w[static_cast<std::size_t>(y) * kSsimWindow + x] = g;
        sum += g;
      }
    }
    for (double& v : w) v /= sum;
    return w;
  }();
  return window;
}

}  // namespace

double ssim(const ImageY& y, const ImageY& y_hat, int shave) {
  check_metric_inputs(y, y_hat, shave, "ssim");
  const int h = y.h - 2 * shave;
  const int w = y.w - 2 * shave;
  if (h < kSsimWindow || w < kSsimWindow) {
    throw DomainError("ssim: image too small after shaving (" + std::to_string(h) + "x" +
                      std::to_string(w) + ", need >= 11x11)");
  }
  const std::vector<double>& win = ssim_window();
  constexpr double kC1 = 0.01 * 0.01;  // (K1 * L)^2, L = 1
  constexpr double kC2 = 0.03 * 0.03;

  double total = 0.0;
  std::size_t positions = 0;
  for (int wy = 0; wy + kSsimWindow <= h; ++wy) {
    for (int wx = 0; wx + kSsimWindow <= w; ++wx) {
      double mu1 = 0.0, mu2 = 0.0;
      double s11 = 0.0, s22 = 0.0, s12 = 0.0;
      for (int dy = 0; dy < kSsimWindow; ++dy) {
        for (int dx = 0; dx < kSsimWindow; ++dx) {
          const double g = win[static_cast<std::size_t>(dy) * kSsimWindow + dx];
          const double a = y.at(shave + wy + dy, shave + wx + dx);
          const double b = std::clamp(y_hat.at(shave + wy + dy, shave + wx + dx), 0.0, 1.0);
          mu1 += g * a;
          mu2 += g * b;
          s11 += g * a * a;
          s22 += g * b * b;
          s12 += g * a * b;
        }
      }
      const double var1 = s11 - mu1 * mu1;
      const double var2 = s22 - mu2 * mu2;
      const double cov = s12 - mu1 * mu2;
      const double num = (2.0 * mu1 * mu2 + kC1) * (2.0 * cov + kC2);
      const double den = (mu1 * mu1 + mu2 * mu2 + kC1) * (var1 + var2 + kC2);
      total += num / den;
      ++positions;
    }
  }
  return total / static_cast<double>(positions);
}

namespace {

Tensor image_to_tensor(const ImageY& img) {
  Tensor t(1, 1, img.h, img.w);
  t.v = img.v;
  return t;
}

}  // namespace

EvalResult evaluate(const Network& net, const std::vector<std::pair<std::string, ImageY>>& images,
                    int scale, const std::string& dataset_name, int threads) {
  if (images.empty()) throw Error("evaluate: empty evaluation set");
  if (scale < 1) throw DomainError("evaluate: scale must be >= 1");

  EvalResult result;
  result.dataset = dataset_name;
  result.scale = scale;
  result.shave = scale;
  result.rows.resize(images.size());

  auto eval_one = [&](std::size_t i) {
    const auto& [id, hr] = images[i];
    const ImageY cropped = center_crop(hr, (hr.h / scale) * scale, (hr.w / scale) * scale);
    ImageY input = cropped;
    if (scale > 1) {
      const ImageY lr = bicubic_resize_to(cropped, cropped.h / scale, cropped.w / scale);
      input = bicubic_resize_to(lr, cropped.h, cropped.w);
    }
    const Tensor out = forward(net, image_to_tensor(input));
    ImageY pred(cropped.h, cropped.w);
    pred.v = out.v;
    for (double& v : pred.v) v = std::clamp(v, 0.0, 1.0);
    result.rows[i] = {id, psnr(cropped, pred, scale), ssim(cropped, pred, scale)};
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(images.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < images.size(); ++i) eval_one(i);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex mu;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next >= images.size()) return;
            i = next++;
          }
          eval_one(i);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::sort(result.rows.begin(), result.rows.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  double psum = 0.0, ssum = 0.0;
  for (const auto& row : result.rows) {
    psum += row.psnr;
    ssum += row.ssim;
  }
  result.mean_psnr = psum / static_cast<double>(result.rows.size());
  result.mean_ssim = ssum / static_cast<double>(result.rows.size());
  return result;
}

void export_importance_png(const ImportanceMap& map, const std::filesystem::path& path) {
  std::vector<std::uint8_t> pixels(map.weights.size());
  for (std::size_t i = 0; i < map.weights.size(); ++i) {
    const double scaled = std::clamp(map.weights[i], 0.0, 1.0) * 255.0;
    pixels[i] = static_cast<std::uint8_t>(std::floor(scaled + 0.5));
  }
  write_png_gray(path, pixels, map.h, map.w);
}

void write_report_csv(const EvalResult& result, const std::string& config_hash,
                      const std::filesystem::path& path) {
  std::string out = "# config_hash=" + config_hash + "\n";
  out += "id,psnr,ssim\n";
  char buf[128];
  for (const auto& row : result.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f\n", row.id.c_str(), row.psnr, row.ssim);
    out += buf;
  }
  write_file(path, out);
}

void write_report_json(const EvalResult& result, const std::string& config_hash,
                       const std::filesystem::path& path) {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["dataset"] = result.dataset;
  j["scale"] = result.scale;
  j["shave"] = result.shave;
  j["count"] = result.rows.size();
  j["mean_psnr"] = result.mean_psnr;
  j["mean_ssim"] = result.mean_ssim;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"id", row.id}, {"psnr", row.psnr}, {"ssim", row.ssim}});
  }
  j["per_image"] = std::move(rows);
  write_file(path, j.dump(2) + "\n");
}

LoadedReport load_report_json(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError(path.string() + ": " + e.what());
  }
  LoadedReport report;
  try {
    report.config_hash = j.at("config_hash").get<std::string>();
    report.result.dataset = j.at("dataset").get<std::string>();
    report.result.scale = j.at("scale").get<int>();
    report.result.shave = j.at("shave").get<int>();
    report.result.mean_psnr = j.at("mean_psnr").get<double>();
    report.result.mean_ssim = j.at("mean_ssim").get<double>();
    for (const nlohmann::json& row : j.at("per_image")) {
      report.result.rows.push_back({row.at("id").get<std::string>(),
                                    row.at("psnr").get<double>(),
                                    row.at("ssim").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError(path.string() + ": " + e.what());
  }
  return report;
}

}  // namespace ailsr
