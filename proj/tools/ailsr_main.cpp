// Command-line front end: data preparation, training (traditional / adaptive
// importance / distillation), evaluation and run comparison.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 missing dependency
// artifact (e.g. teacher checkpoint), 4 data error.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <json.hpp>

#include "ailsr/data.hpp"
#include "ailsr/metrics.hpp"
#include "ailsr/runconfig.hpp"
#include "ailsr/serial.hpp"
#include "ailsr/training.hpp"

namespace fs = std::filesystem;
using namespace ailsr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitMissingArtifact = 3;
constexpr int kExitData = 4;

int default_threads() {
  if (const char* env = std::getenv("AILSR_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

struct PrepareArgs {
  std::string images;
  std::string out;
  int scale = 2;
  int patch = 41;
  int stride = 41;
  std::uint64_t seed = 0;
  bool aug_rotate = false;
  bool aug_flip = false;
  bool aug_scales = false;
  bool aug_full = false;
};

int cmd_prepare(const PrepareArgs& args) {
  if (!fs::is_directory(args.images)) {
    std::cerr << "error: image directory not found: " << args.images << "\n";
    return kExitConfig;
  }
  AugmentSpec aug;
  if (args.aug_full) {
    aug = AugmentSpec::full();
  } else {
    if (args.aug_rotate) aug.rotations = {90, 180, 270};
    aug.flip = args.aug_flip;
    if (args.aug_scales) aug.scales = {1.0, 0.7, 0.5};
  }
  try {
    const DatasetManifest manifest =
        build_manifest(args.images, args.scale, aug, args.patch, args.stride, args.seed, args.out);
    std::printf("images:   %zu\n", manifest.sources.size());
    std::printf("patches:  %zu\n", manifest.records.size());
    std::printf("geometry: %dx%d stride %d, scale x%d\n", manifest.patch_size, manifest.patch_size,
                manifest.stride, manifest.scale);
    std::printf("checksum: %08x\n", manifest.checksum);
    std::printf("wrote %s and %s\n", (fs::path(args.out) / "manifest.json").c_str(),
                (fs::path(args.out) / "patches.bin").c_str());
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

Network load_teacher_or_exit(const fs::path& path, int& exit_code) {
  if (!fs::exists(path)) {
    std::cerr << "error: teacher checkpoint not found: " << path << "\n";
    exit_code = kExitMissingArtifact;
    return {};
  }
  try {
    return load_checkpoint(path).net;
  } catch (const Error& e) {
    std::cerr << "error: cannot load teacher checkpoint: " << e.what() << "\n";
    exit_code = kExitMissingArtifact;
    return {};
  }
}

int cmd_train(const std::string& config_path, bool force, std::optional<int> threads_override) {
  RunConfig cfg;
  try {
    cfg = load_run_config(config_path);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (threads_override.has_value()) cfg.train.threads = *threads_override;

  const std::string hash = cfg.config_hash();
  const fs::path out = cfg.out_dir;
  if (fs::exists(out) && !fs::is_empty(out) && !force) {
    std::cerr << "error: output directory " << out
              << " is not empty (run directories are append-only; use --force to overwrite)\n";
    return kExitConfig;
  }

  // dependencies first, so failures happen before any output is written
  Network teacher;
  if (cfg.needs_teacher()) {
    int exit_code = kExitOk;
    teacher = load_teacher_or_exit(cfg.teacher_checkpoint, exit_code);
    if (exit_code != kExitOk) return exit_code;
  }

  Dataset data;
  try {
    data.pairs = load_pairs(cfg.manifest_dir);
    data.scale = load_manifest(cfg.manifest_dir).scale;
    if (!cfg.val_images.empty()) data.val_images = load_eval_images(cfg.val_images);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }

  std::error_code ec;
  fs::create_directories(out / "checkpoints", ec);
  fs::create_directories(out / "reports", ec);
  write_file(out / "config.json", cfg.canonical_json());

  RunHooks hooks;
  hooks.progress = &std::cout;
  if (cfg.scheme == Scheme::kAil) {
    fs::create_directories(out / "importance", ec);
    hooks.on_round = [&](int round, const std::vector<ImportanceMap>& maps) {
      char leaf[32];
      std::snprintf(leaf, sizeof(leaf), "round_%03d", round);
      save_importance_store(out / "importance" / leaf, maps, round, hash);
    };
  }

  std::printf("scheme: %s   config hash: %s\n", scheme_name(cfg.scheme).c_str(), hash.c_str());
  RunResult result;
  try {
    switch (cfg.scheme) {
      case Scheme::kTraditional:
        result = run_traditional(cfg.model, data, cfg.train, hooks);
        break;
      case Scheme::kAil:
        result = run_ail(cfg.model, data, cfg.train, cfg.ail,
                         cfg.ail.init == ImportanceInit::kTeacher ? &teacher : nullptr, hooks);
        break;
      case Scheme::kDistill:
        result = run_distill(cfg.model, data, cfg.train, cfg.distill, teacher, hooks);
        break;
    }
  } catch (const Error& e) {
    std::cerr << "error: training failed: " << e.what() << "\n";
    return kExitData;
  }

  CheckpointMeta meta;
  meta.scheme = scheme_name(cfg.scheme);
  meta.epoch = static_cast<int>(result.log.epochs.size());
  meta.seed = cfg.train.seed;
  meta.config_hash = hash;
  save_checkpoint(result.net, out / "checkpoints" / "final.ckpt", meta);

  std::ofstream log_out(out / "log.jsonl", std::ios::binary | std::ios::trunc);
  result.log.write_jsonl(log_out, hash);
  log_out.close();

  if (!data.val_images.empty()) {
    const EvalResult eval =
        evaluate(result.net, data.val_images, data.scale, cfg.val_images.string(),
                 cfg.train.threads);
    write_report_csv(eval, hash, out / "reports" / "report.csv");
    write_report_json(eval, hash, out / "reports" / "summary.json");
    std::printf("final validation: PSNR %.4f dB  SSIM %.6f  (%zu images)\n", eval.mean_psnr,
                eval.mean_ssim, eval.rows.size());
  }
  std::printf("run directory: %s\n", out.c_str());
  return kExitOk;
}

int cmd_eval(const std::string& checkpoint, const std::string& images, int scale,
             const std::string& report_dir, int threads) {
  if (!fs::exists(checkpoint)) {
    std::cerr << "error: checkpoint not found: " << checkpoint << "\n";
    return kExitMissingArtifact;
  }
  LoadedCheckpoint ck;
  try {
    ck = load_checkpoint(checkpoint);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissingArtifact;
  }
  std::vector<std::pair<std::string, ImageY>> eval_images;
  try {
    eval_images = load_eval_images(images);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  try {
    const EvalResult result =
        evaluate(ck.net, eval_images, scale, fs::path(images).filename().string(), threads);
    std::printf("%-24s PSNR        SSIM\n", "image");
    for (const auto& row : result.rows) {
      std::printf("%-24s %9.4f  %9.6f\n", row.id.c_str(), row.psnr, row.ssim);
    }
    std::printf("%-24s %9.4f  %9.6f  (scale x%d, shave %d, %zu images)\n", "mean:",
                result.mean_psnr, result.mean_ssim, result.scale, result.shave,
                result.rows.size());
    if (!report_dir.empty()) {
      write_report_csv(result, ck.meta.config_hash, fs::path(report_dir) / "report.csv");
      write_report_json(result, ck.meta.config_hash, fs::path(report_dir) / "summary.json");
      std::printf("reports written to %s\n", report_dir.c_str());
    }
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

int cmd_compare(const std::vector<std::string>& run_dirs, const std::string& out_file) {
  if (run_dirs.size() < 2) {
    std::cerr << "error: need at least two run report directories\n";
    return kExitConfig;
  }
  std::vector<LoadedReport> reports;
  for (const std::string& dir : run_dirs) {
    const fs::path path = fs::path(dir) / "summary.json";
    try {
      reports.push_back(load_report_json(path));
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitData;
    }
  }
  // all runs must have evaluated the same protocol: same ids, scale, shave
  const LoadedReport& base = reports.front();
  for (const LoadedReport& r : reports) {
    if (r.result.scale != base.result.scale || r.result.shave != base.result.shave ||
        r.result.rows.size() != base.result.rows.size()) {
      std::cerr << "error: evaluation protocols differ between runs (scale/shave/image set)\n";
      return kExitData;
    }
    for (std::size_t i = 0; i < r.result.rows.size(); ++i) {
      if (r.result.rows[i].id != base.result.rows[i].id) {
        std::cerr << "error: evaluation image sets differ between runs ('"
                  << r.result.rows[i].id << "' vs '" << base.result.rows[i].id << "')\n";
        return kExitData;
      }
    }
  }

  std::string csv = "run,mean_psnr,mean_ssim,delta_psnr,delta_ssim,config_hash\n";
  std::string table;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-28s %10s %10s %12s %12s\n", "run", "PSNR", "SSIM",
                "dPSNR", "dSSIM");
  table += buf;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const EvalResult& r = reports[i].result;
    const double dp = r.mean_psnr - base.result.mean_psnr;
    const double ds = r.mean_ssim - base.result.mean_ssim;
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%+.6f,%+.6f,%s\n", run_dirs[i].c_str(),
                  r.mean_psnr, r.mean_ssim, dp, ds, reports[i].config_hash.c_str());
    csv += buf;
    std::snprintf(buf, sizeof(buf), "%-28s %10.4f %10.6f %+12.4f %+12.6f\n", run_dirs[i].c_str(),
                  r.mean_psnr, r.mean_ssim, dp, ds);
    table += buf;
  }
  std::fputs(table.c_str(), stdout);
  if (!out_file.empty()) {
    write_file(out_file, csv);
    write_file(fs::path(out_file).replace_extension(".txt"), table);
    std::printf("comparison written to %s\n", out_file.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lightweight super-resolution training laboratory"};
  app.require_subcommand(1);

  PrepareArgs prep;
  CLI::App* prepare = app.add_subcommand(
      "prepare", "Decode an image folder into a packed patch archive + manifest");
  prepare->add_option("--images", prep.images, "Directory of PNG/PPM source images")->required();
  prepare->add_option("--out", prep.out, "Output directory for manifest.json + patches.bin")
      ->required();
  prepare->add_option("--scale", prep.scale, "Super-resolution factor")
      ->check(CLI::IsMember({2, 3, 4}))
      ->default_val(2);
  prepare->add_option("--patch", prep.patch, "Patch size in pixels")->default_val(41);
  prepare->add_option("--stride", prep.stride, "Patch grid stride")->default_val(41);
  prepare->add_option("--seed", prep.seed, "Seed recorded in the manifest")->default_val(0);
  prepare->add_flag("--aug-rotate", prep.aug_rotate, "Add 90/180/270 degree rotations");
  prepare->add_flag("--aug-flip", prep.aug_flip, "Add horizontal flips");
  prepare->add_flag("--aug-scales", prep.aug_scales, "Add 0.7x and 0.5x rescaled copies");
  prepare->add_flag("--aug-full", prep.aug_full,
                    "Full recipe: rotations + flips + rescales (24 variants per image)");

  std::string config_path;
  bool force = false;
  std::optional<int> threads_override;
  CLI::App* train = app.add_subcommand(
      "train", "Train with a JSON config (scheme: traditional, ail or distill)");
  train->add_option("--config", config_path, "JSON run configuration")->required();
  train->add_flag("--force", force, "Allow writing into a non-empty run directory");
  int threads_flag = 0;
  CLI::Option* topt = train->add_option(
      "--threads", threads_flag,
      "Worker threads for inference fan-out (default 1 or AILSR_THREADS; recorded in the config "
      "hash)");

  std::string ckpt, eval_images_dir, report_dir;
  int eval_scale = 2;
  int eval_threads = default_threads();
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on an image folder");
  eval_cmd->add_option("--checkpoint", ckpt, "Checkpoint file")->required();
  eval_cmd->add_option("--images", eval_images_dir, "Directory of evaluation images")->required();
  eval_cmd->add_option("--scale", eval_scale, "Super-resolution factor")
      ->check(CLI::IsMember({2, 3, 4}))
      ->default_val(2);
  eval_cmd->add_option("--report", report_dir, "Directory for report.csv + summary.json");
  eval_cmd->add_option("--threads", eval_threads, "Worker threads");

  std::vector<std::string> run_dirs;
  std::string compare_out;
  CLI::App* compare = app.add_subcommand(
      "compare", "Tabulate PSNR/SSIM deltas between run reports (first run is the baseline)");
  compare->add_option("--runs", run_dirs, "Two or more report directories (summary.json inside)")
      ->required()
      ->expected(-2);
  compare->add_option("--out", compare_out, "CSV output path (a .txt table is written alongside)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (prepare->parsed()) return cmd_prepare(prep);
    if (train->parsed()) {
      if (topt->count() > 0) threads_override = threads_flag;
      return cmd_train(config_path, force, threads_override);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(ckpt, eval_images_dir, eval_scale, report_dir, eval_threads);
    }
    if (compare->parsed()) return cmd_compare(run_dirs, compare_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}
