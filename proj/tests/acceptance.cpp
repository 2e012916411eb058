// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Usage: acceptance <assets_dir> <work_dir>
//
// The heavyweight toy experiment (teacher + two students on the shipped
// corpus) runs once and feeds the curriculum and reproduction criteria.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ailsr/conv.hpp"
#include "ailsr/data.hpp"
#include "ailsr/gradcheck.hpp"
#include "ailsr/importance.hpp"
#include "ailsr/metrics.hpp"
#include "ailsr/model.hpp"
#include "ailsr/rng.hpp"
#include "ailsr/serial.hpp"
#include "ailsr/training.hpp"

namespace fs = std::filesystem;
using namespace ailsr;

namespace {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CriterionResult> g_results;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void record(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  g_results.push_back({id, name, pass, detail, seconds});
  std::printf("[%s] criterion %2d: %s (%s; %.1fs)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// f(w) = d*w + (w - w')(ln((w - w')/lambda) - 1), limit value at w = w'.
double subproblem_f(double w, double w_prev, double d, double lambda) {
  const double delta = w - w_prev;
  if (delta <= 0.0) return d * w;
  return d * w + delta * (std::log(delta / lambda) - 1.0);
}

// Full-grid minimizer over [w_prev, 1] at `resolution`, found by coarse-to-
// fine refinement. Criterion 2 separately verifies convexity of f, which is
// what makes the refinement equivalent to scanning the full uniform grid.
double grid_minimize_f(double w_prev, double d, double lambda, double resolution) {
  double lo = w_prev, hi = 1.0;
  if (hi <= lo) return w_prev;
  double step = (hi - lo) / 2048.0;
  double best_w = lo;
  for (;;) {
    step = std::max(step, resolution);
    double best_f = std::numeric_limits<double>::infinity();
    for (double w = lo; w <= hi + 0.5 * step; w += step) {
      const double wc = std::min(w, 1.0);
      const double f = subproblem_f(wc, w_prev, d, lambda);
      if (f < best_f) {
        best_f = f;
        best_w = wc;
      }
    }
    if (step <= resolution) return best_w;
    lo = std::max(w_prev, best_w - 2.0 * step);
    hi = std::min(1.0, best_w + 2.0 * step);
    step /= 32.0;
  }
}

struct Triple {
  double w_prev, d, lambda;
};

std::vector<Triple> sample_triples(int count, std::uint64_t seed) {
  std::vector<Triple> triples;
  Rng rng(seed);
  triples.reserve(count);
  for (int i = 0; i < count; ++i) {
    triples.push_back({rng.uniform(), rng.uniform(0.0, 10.0), rng.uniform(1e-6, 1.0)});
  }
  return triples;
}

void criterion_1_closed_form(const std::vector<Triple>& triples) {
  Timer timer;
  double max_dev = 0.0;
  int failures = 0;
  for (const Triple& t : triples) {
    const double closed = importance_update(t.w_prev, t.d, t.lambda);
    const double grid = grid_minimize_f(t.w_prev, t.d, t.lambda, 1e-6);
    const double dev = std::abs(closed - grid);
    max_dev = std::max(max_dev, dev);
    if (dev > 2e-6) ++failures;
  }
  const double secs = timer.seconds();
  const bool pass = failures == 0 && secs < 5.0;
  record(1, "Theorem 1 closed form matches the grid minimizer", pass,
         fmt("1000 triples, grid 1e-6, max |closed-grid| %.2e, budget <5s", max_dev), secs);
}

void criterion_2_convexity(const std::vector<Triple>& triples) {
  Timer timer;
  double worst = std::numeric_limits<double>::infinity();
  for (const Triple& t : triples) {
    const double span = 1.0 - t.w_prev;
    if (span < 4e-6) continue;
    // coarse pass over the whole interval plus fine windows at both ends and
    // around the interior minimizer
    const auto scan = [&](double lo, double hi, double step) {
      if (hi - lo < 2.0 * step) return;
      double f0 = subproblem_f(lo, t.w_prev, t.d, t.lambda);
      double f1 = subproblem_f(lo + step, t.w_prev, t.d, t.lambda);
      for (double w = lo + 2.0 * step; w <= hi; w += step) {
        const double f2 = subproblem_f(w, t.w_prev, t.d, t.lambda);
        worst = std::min(worst, f2 - 2.0 * f1 + f0);
        f0 = f1;
        f1 = f2;
      }
    };
    scan(t.w_prev + 1e-9, 1.0, span / 1000.0);
    scan(t.w_prev + 1e-9, std::min(1.0, t.w_prev + 2e-3), 1e-6);
    scan(std::max(t.w_prev, 1.0 - 2e-3), 1.0, 1e-6);
    const double interior = std::min(1.0, t.w_prev + t.lambda * std::exp(-t.d));
    scan(std::max(t.w_prev + 1e-9, interior - 1e-3), std::min(1.0, interior + 1e-3), 1e-6);
  }
  const bool pass = worst >= -1e-12;
  record(2, "subproblem f is convex (second differences on the grid)", pass,
         fmt("min second difference %.3e >= -1e-12", worst), timer.seconds());
}

void criterion_3_param_counts() {
  Timer timer;
  struct Row {
    double ratio;
    int width;
    std::int64_t spec_value;  // literal from the acceptance criterion
    int paper_k;
  };
  const std::vector<Row> rows = {
      {0.8, 13, 27860, 28},  {0.75, 16, 42065, 42},   {0.66, 22, 79223, 79},
      {0.5, 32, 166753, 166}, {0.0, 64, 665921, 665},
  };
  bool pass = true;
  std::string detail;
  for (const Row& row : rows) {
    ModelSpec spec;
    spec.depth = 20;
    spec.base_width = 64;
    spec.ratio = row.ratio;
    if (spec.width() != row.width) {
      pass = false;
      detail += fmt("width(%g)=%d!=%d ", row.ratio, spec.width(), row.width);
      continue;
    }
    const std::int64_t counted = count_params(spec);

    // the closed form must equal brute-force enumeration of a built network
    const Network net = build_network(spec);
    std::int64_t stored = 0;
    for (const ConvParams& layer : net.layers) {
      stored += static_cast<std::int64_t>(layer.weights.size() + layer.biases.size());
    }
    if (counted != stored) {
      pass = false;
      detail += fmt("f%d closed form %lld != enumeration %lld ", row.width,
                    static_cast<long long>(counted), static_cast<long long>(stored));
    }
    if (counted != row.spec_value) {
      pass = false;
      detail += fmt("f%d count %lld != pinned %lld ", row.width, static_cast<long long>(counted),
                    static_cast<long long>(row.spec_value));
    }
    // paper agreement within rounding to the nearest 1K
    if (std::llabs(counted - row.paper_k * 1000LL) > 1000) {
      pass = false;
      detail += fmt("f%d count %lld not within 1K of %dK ", row.width,
                    static_cast<long long>(counted), row.paper_k);
    }
  }
  if (detail.empty()) detail = "all five widths match";
  record(3, "parameter-count reproduction (depth 20, widths 13/16/22/32/64)", pass, detail,
         timer.seconds());
}

void criterion_4_gradient_checks() {
  Timer timer;
  double worst = 0.0;
  std::string worst_what = "none";
  const auto note = [&](const char* what, const GradCheckReport& rep) {
    if (rep.max_rel_err > worst) {
      worst = rep.max_rel_err;
      worst_what = what;
    }
  };

  Rng rng(414243);
  const auto random_tensor = [&rng](int n, int c, int h, int w, double lo, double hi) {
    Tensor t(n, c, h, w);
    for (double& v : t.v) v = rng.uniform(lo, hi);
    return t;
  };

  {  // plain convolution
    Tensor in = random_tensor(1, 2, 8, 8, -1.0, 1.0);
    ConvParams p(3, 2, 3, 3);
    for (double& v : p.weights) v = rng.uniform(-1.0, 1.0);
    for (double& v : p.biases) v = rng.uniform(-1.0, 1.0);
    Tensor gout = random_tensor(1, 3, 8, 8, -1.0, 1.0);
    ConvGrads g = conv2d_backward(in, p, gout, 1);
    auto loss = [&]() {
      const Tensor out = conv2d_forward(in, p, 1);
      double s = 0.0;
      for (std::size_t i = 0; i < out.v.size(); ++i) s += gout.v[i] * out.v[i];
      return s;
    };
    std::vector<GradCheckParam> params = {{"conv.input", in.v, g.grad_input.v},
                                          {"conv.weights", p.weights, g.grad_weights},
                                          {"conv.biases", p.biases, g.grad_biases}};
    note("conv", grad_check(loss, params, 1e-5, 1e-4));
  }
  {  // relu
    Tensor in = random_tensor(1, 2, 8, 8, -1.0, 1.0);
    for (double& v : in.v) {
      if (std::abs(v) < 1e-3) v = 0.25;
    }
    Tensor gout = random_tensor(1, 2, 8, 8, -1.0, 1.0);
    Tensor g = relu_backward(in, gout);
    auto loss = [&]() {
      const Tensor out = relu_forward(in);
      double s = 0.0;
      for (std::size_t i = 0; i < out.v.size(); ++i) s += gout.v[i] * out.v[i];
      return s;
    };
    std::vector<GradCheckParam> params = {{"relu.input", in.v, g.v}};
    note("relu", grad_check(loss, params, 1e-5, 1e-4));
  }

  ModelSpec spec;
  spec.depth = 3;
  spec.base_width = 4;
  spec.seed = 4444;
  Network net = build_network(spec);
  const auto net_params = [&](NetworkGrads& grads) {
    std::vector<GradCheckParam> params;
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
      params.push_back(
          {"layer" + std::to_string(i) + ".w", net.layers[i].weights, grads.weights[i]});
      params.push_back(
          {"layer" + std::to_string(i) + ".b", net.layers[i].biases, grads.biases[i]});
    }
    return params;
  };

  {  // residual network end to end
    Tensor x = random_tensor(1, 1, 8, 8, 0.0, 1.0);
    Tensor gout = random_tensor(1, 1, 8, 8, -1.0, 1.0);
    NetworkGrads grads;
    const ForwardTrace trace = forward_train(net, x);
    backward(net, trace, gout, grads);
    auto loss = [&]() {
      const Tensor out = forward(net, x);
      double s = 0.0;
      for (std::size_t i = 0; i < out.v.size(); ++i) s += gout.v[i] * out.v[i];
      return s;
    };
    auto params = net_params(grads);
    note("residual-net", grad_check(loss, params, 1e-5, 1e-4));
  }
  {  // weighted MSE through the network
    Tensor x = random_tensor(1, 1, 8, 8, 0.0, 1.0);
    Tensor y = random_tensor(1, 1, 8, 8, 0.0, 1.0);
    Tensor w = random_tensor(1, 1, 8, 8, 0.0, 1.0);
    NetworkGrads grads;
    const ForwardTrace trace = forward_train(net, x);
    const LossAndGrad lg = weighted_mse(y, trace.output, w);
    backward(net, trace, lg.grad, grads);
    auto loss = [&]() { return weighted_mse(y, forward(net, x), w).loss; };
    auto params = net_params(grads);
    note("weighted-mse", grad_check(loss, params, 1e-5, 1e-4));
  }
  {  // distillation loss through the network
    ModelSpec tspec = spec;
    tspec.seed = 5555;
    const Network teacher = build_network(tspec);
    Tensor x = random_tensor(1, 1, 8, 8, 0.0, 1.0);
    Tensor y = random_tensor(1, 1, 8, 8, 0.0, 1.0);
    const Tensor t = forward(teacher, x);
    NetworkGrads grads;
    const ForwardTrace trace = forward_train(net, x);
    const LossAndGrad lg = distill_loss(y, trace.output, t, 0.1);
    backward(net, trace, lg.grad, grads);
    auto loss = [&]() { return distill_loss(y, forward(net, x), t, 0.1).loss; };
    auto params = net_params(grads);
    note("distill-loss", grad_check(loss, params, 1e-5, 1e-4));
  }

  const double secs = timer.seconds();
  const bool pass = worst <= 1e-4 && secs < 30.0;
  record(4, "finite-difference gradient checks (conv/relu/residual/losses)",
         pass, fmt("max rel err %.2e at %s, budget <30s", worst, worst_what.c_str()), secs);
}

Dataset load_dataset_from(const fs::path& manifest_dir, const fs::path& val_dir) {
  Dataset data;
  data.pairs = load_pairs(manifest_dir);
  data.scale = load_manifest(manifest_dir).scale;
  if (!val_dir.empty()) data.val_images = load_eval_images(val_dir);
  return data;
}

std::string checkpoint_bytes(const Network& net, const fs::path& path) {
  CheckpointMeta meta;
  meta.scheme = "acceptance";
  meta.config_hash = "acceptance";
  save_checkpoint(net, path, meta);
  return read_file(path);
}

std::string log_bytes(const TrainLog& log) {
  std::ostringstream out;
  log.write_jsonl(out, "acceptance");
  return out.str();
}

void criterion_5_degeneration(const fs::path& four_manifest, const fs::path& work) {
  Timer timer;
  const Dataset data = load_dataset_from(four_manifest, "");

  ModelSpec spec;
  spec.depth = 4;
  spec.base_width = 8;
  spec.seed = 505;
  TrainConfig cfg;
  cfg.epochs_per_round = 8;
  cfg.batch_size = 16;
  cfg.lr_initial = 0.01;
  cfg.seed = 505;

  const RunResult trad = run_traditional(spec, data, cfg);
  AilRunConfig acfg;
  acfg.init = ImportanceInit::kOnes;
  acfg.ail.iterations = 0;
  const RunResult ail = run_ail(spec, data, cfg, acfg, nullptr);

  const std::string a = checkpoint_bytes(trad.net, work / "degen_traditional.ckpt");
  const std::string b = checkpoint_bytes(ail.net, work / "degen_ail_ones_t0.ckpt");
  const double secs = timer.seconds();
  const bool pass = a == b && secs < 120.0;
  record(5, "degeneration: AIL(all-ones, T=0) == traditional, bitwise",
         pass,
         fmt("checkpoints %s (%zu bytes), 4-image corpus, budget <2min",
             a == b ? "identical" : "DIFFER", a.size()),
         secs);
}

struct ToyExperiment {
  double teacher_psnr = 0.0;
  double traditional_psnr = 0.0;
  double ail_psnr = 0.0;
  std::vector<RoundRecord> rounds;
  fs::path store_dir;
  double seconds = 0.0;
  int store_rounds = 0;
};

ToyExperiment run_toy_experiment(const fs::path& manifest_dir, const fs::path& val_dir,
                                 const fs::path& work) {
  Timer timer;
  ToyExperiment exp;
  const Dataset data = load_dataset_from(manifest_dir, val_dir);

  // hyperparameters calibrated for the desk-scale corpus: the paper's 0.1
  // initial rate assumes the full 291-image setup and diverges here
  TrainConfig cfg;
  cfg.epochs_per_round = 50;
  cfg.ail_epochs_per_round = 10;
  cfg.batch_size = 32;
  cfg.lr_initial = 0.02;
  cfg.lr_decay_every = 10;

  ModelSpec teacher_spec;
  teacher_spec.depth = 8;
  teacher_spec.base_width = 32;
  teacher_spec.ratio = 0.0;
  teacher_spec.seed = 101;
  cfg.seed = 101;
  std::printf("  [toy] training teacher d8/w32 (50 epochs)...\n");
  std::fflush(stdout);
  const RunResult teacher = run_traditional(teacher_spec, data, cfg);
  exp.teacher_psnr = evaluate(teacher.net, data.val_images, data.scale).mean_psnr;

  ModelSpec student_spec = teacher_spec;
  student_spec.ratio = 0.75;  // 32 -> 8 feature maps
  student_spec.seed = 202;
  cfg.seed = 202;
  std::printf("  [toy] training traditional student d8/w8...\n");
  std::fflush(stdout);
  const RunResult trad = run_traditional(student_spec, data, cfg);
  exp.traditional_psnr = evaluate(trad.net, data.val_images, data.scale).mean_psnr;

  AilRunConfig acfg;
  acfg.init = ImportanceInit::kTeacher;
  acfg.ail.lambda = 0.15;
  acfg.ail.iterations = 5;
  exp.store_dir = work / "toy_importance";
  fs::remove_all(exp.store_dir);
  RunHooks hooks;
  hooks.on_round = [&](int round, const std::vector<ImportanceMap>& maps) {
    char leaf[32];
    std::snprintf(leaf, sizeof(leaf), "round_%03d", round);
    save_importance_store(exp.store_dir / leaf, maps, round, "acceptance");
    exp.store_rounds = round + 1;
  };
  std::printf("  [toy] training AIL student d8/w8 (teacher init, T=5)...\n");
  std::fflush(stdout);
  const RunResult ail = run_ail(student_spec, data, cfg, acfg, &teacher.net, hooks);
  exp.ail_psnr = evaluate(ail.net, data.val_images, data.scale).mean_psnr;
  exp.rounds = ail.log.rounds;
  exp.seconds = timer.seconds();
  return exp;
}

void criterion_7_directional(const ToyExperiment& exp) {
  int non_decreasing = 0;
  const int transitions = static_cast<int>(exp.rounds.size()) - 1;
  for (std::size_t t = 1; t < exp.rounds.size(); ++t) {
    if (exp.rounds[t].val_psnr >= exp.rounds[t - 1].val_psnr) ++non_decreasing;
  }
  bool importance_grew = true;
  for (std::size_t t = 1; t < exp.rounds.size(); ++t) {
    if (exp.rounds[t].mean_importance < exp.rounds[t - 1].mean_importance) {
      importance_grew = false;
    }
  }
  const bool psnr_ok = exp.ail_psnr >= exp.traditional_psnr - 0.05;
  const bool series_ok = transitions == 5 && non_decreasing >= transitions - 2;
  const bool time_ok = exp.seconds <= 1800.0;
  const bool pass = psnr_ok && series_ok && importance_grew && time_ok;
  record(7, "directional reproduction: AIL student vs traditional student", pass,
         fmt("teacher %.2f dB, traditional %.2f dB, AIL %.2f dB (needs >= %.2f); "
             "%d/%d round transitions non-decreasing (needs >=3); %.0fs of 1800s",
             exp.teacher_psnr, exp.traditional_psnr, exp.ail_psnr,
             exp.traditional_psnr - 0.05, non_decreasing, transitions, exp.seconds),
         exp.seconds);
}

void criterion_6_monotone_curriculum(const ToyExperiment& exp) {
  Timer timer;
  bool per_pixel_ok = true;
  bool mean_ok = true;
  std::vector<std::vector<ImportanceMap>> rounds;
  for (int t = 0; t < exp.store_rounds; ++t) {
    char leaf[32];
    std::snprintf(leaf, sizeof(leaf), "round_%03d", t);
    rounds.push_back(load_importance_store(exp.store_dir / leaf));
  }
  double prev_mean = -1.0;
  bool saturated = false;
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    const double mean = mean_weight(rounds[t]);
    if (t > 0) {
      for (std::size_t s = 0; s < rounds[t].size() && per_pixel_ok; ++s) {
        for (std::size_t k = 0; k < rounds[t][s].weights.size(); ++k) {
          if (rounds[t][s].weights[k] < rounds[t - 1][s].weights[k]) {
            per_pixel_ok = false;
            break;
          }
        }
      }
      if (!saturated && mean <= prev_mean) mean_ok = false;  // strict until saturation
    }
    saturated = fraction_saturated(rounds[t]) == 1.0;
    prev_mean = mean;
  }
  const bool pass = per_pixel_ok && mean_ok && rounds.size() == 6;
  record(6, "monotone curriculum on the stored importance maps",
         pass,
         fmt("%zu stored rounds, per-pixel non-decreasing: %s, mean strictly increasing: %s",
             rounds.size(), per_pixel_ok ? "yes" : "NO", mean_ok ? "yes" : "NO"),
         timer.seconds());
}

void criterion_8_teacher_init() {
  Timer timer;
  TeacherInitConfig cfg;  // mu0 = 0.01, alpha0 = 100
  PixelLossMap zero{"z", 1, 1, {0.0}};
  const bool exact_one = importance_init_from_teacher(zero, cfg).weights[0] == 1.0;

  PixelLossMap grid{"g", 1, 1000, {}};
  grid.values.resize(1000);
  for (int i = 0; i < 1000; ++i) grid.values[i] = i * (0.2 / 1000.0);
  const ImportanceMap g = importance_init_from_teacher(grid, cfg);
  bool strictly_decreasing = true;
  for (int i = 1; i < 1000; ++i) {
    if (!(g.weights[i] < g.weights[i - 1])) strictly_decreasing = false;
  }

  PixelLossMap mid{"m", 1, 1, {cfg.mu0}};
  const double got = importance_init_from_teacher(mid, cfg).weights[0];
  const double want = (1.0 + std::exp(-cfg.mu0 * cfg.alpha0)) / 2.0;
  const bool midpoint_ok = std::abs(got - want) <= 1e-12;

  const bool pass = exact_one && strictly_decreasing && midpoint_ok;
  record(8, "teacher importance function g", pass,
         fmt("g(0)==1: %s; strictly decreasing on 1000 points: %s; |g(mu0)-%.12f| = %.1e",
             exact_one ? "yes" : "NO", strictly_decreasing ? "yes" : "NO", want,
             std::abs(got - want)),
         timer.seconds());
}

void criterion_9_metric_oracles(const fs::path& assets) {
  Timer timer;
  ImageY a(16, 16), b(16, 16);
  for (double& v : a.v) v = 0.5;
  for (double& v : b.v) v = 0.6;  // MSE 0.01
  const double p = psnr(a, b, 0);
  const bool psnr_ok = std::abs(p - 20.0) <= 1e-9;

  bool ssim_ok = true;
  std::size_t images = 0;
  for (const char* split : {"train", "val"}) {
    for (const auto& [id, img] : load_eval_images(assets / "corpus" / split)) {
      if (std::abs(ssim(img, img, 0) - 1.0) > 1e-12) ssim_ok = false;
      ++images;
    }
  }
  const bool pass = psnr_ok && ssim_ok;
  record(9, "metric oracles (20 dB anchor, SSIM self-similarity)", pass,
         fmt("psnr(MSE=0.01) = %.12f; ssim(y,y)==1 on %zu corpus images: %s", p, images,
             ssim_ok ? "yes" : "NO"),
         timer.seconds());
}

void criterion_10_determinism(const fs::path& four_manifest, const fs::path& work) {
  Timer timer;
  const Dataset data = load_dataset_from(four_manifest, "");

  ModelSpec teacher_spec;
  teacher_spec.depth = 3;
  teacher_spec.base_width = 8;
  teacher_spec.seed = 900;
  TrainConfig tiny;
  tiny.epochs_per_round = 4;
  tiny.ail_epochs_per_round = 2;
  tiny.batch_size = 16;
  tiny.lr_initial = 0.01;
  tiny.seed = 900;
  const RunResult teacher = run_traditional(teacher_spec, data, tiny);

  ModelSpec spec = teacher_spec;
  spec.seed = 901;
  tiny.seed = 901;

  bool all_identical = true;
  std::string detail;
  const auto check_scheme = [&](const std::string& name, auto&& runner) {
    const RunResult r1 = runner();
    const RunResult r2 = runner();
    const std::string c1 = checkpoint_bytes(r1.net, work / ("det_" + name + "_1.ckpt"));
    const std::string c2 = checkpoint_bytes(r2.net, work / ("det_" + name + "_2.ckpt"));
    const bool same = c1 == c2 && log_bytes(r1.log) == log_bytes(r2.log);
    if (!same) all_identical = false;
    detail += name + (same ? ": identical " : ": DIFFER ");
  };

  check_scheme("traditional", [&] { return run_traditional(spec, data, tiny); });
  check_scheme("ail", [&] {
    AilRunConfig acfg;
    acfg.ail.iterations = 1;
    return run_ail(spec, data, tiny, acfg, &teacher.net);
  });
  check_scheme("distill", [&] {
    DistillConfig dcfg;
    return run_distill(spec, data, tiny, dcfg, teacher.net);
  });

  record(10, "determinism: repeated runs are byte-identical (checkpoints + logs)", all_identical,
         detail, timer.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <assets_dir> <work_dir>\n");
    return 64;
  }
  const fs::path assets = argv[1];
  const fs::path work = argv[2];
  fs::create_directories(work);

  try {
    // shared datasets
    const fs::path data_full = work / "data_x2";
    build_manifest(assets / "corpus" / "train", 2, AugmentSpec::none(), 32, 32, 1, data_full);

    const fs::path four_src = work / "corpus4";
    fs::remove_all(four_src);
    fs::create_directories(four_src);
    int copied = 0;
    for (const auto& entry : fs::directory_iterator(assets / "corpus" / "train")) {
      if (copied >= 4) break;
      fs::copy_file(entry.path(), four_src / entry.path().filename());
      ++copied;
    }
    const fs::path data_four = work / "data4_x2";
    build_manifest(four_src, 2, AugmentSpec::none(), 16, 16, 1, data_four);

    const std::vector<Triple> triples = sample_triples(1000, 20240610);
    criterion_1_closed_form(triples);
    criterion_2_convexity(triples);
    criterion_3_param_counts();
    criterion_4_gradient_checks();
    criterion_5_degeneration(data_four, work);

    const ToyExperiment exp =
        run_toy_experiment(data_full, assets / "corpus" / "val", work);
    criterion_6_monotone_curriculum(exp);
    criterion_7_directional(exp);

    criterion_8_teacher_init();
    criterion_9_metric_oracles(assets);
    criterion_10_determinism(data_four, work);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
    return 64;
  }

  std::sort(g_results.begin(), g_results.end(),
            [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  int failures = 0;
  std::printf("\n==== acceptance summary ====\n");
  for (const CriterionResult& r : g_results) {
    std::printf("[%s] criterion %2d: %s — %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str());
    failures += r.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(g_results.size()) - failures,
              g_results.size());
  return failures;
}
