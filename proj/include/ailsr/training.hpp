#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ailsr/data.hpp"
#include "ailsr/importance.hpp"
#include "ailsr/model.hpp"

namespace ailsr {

enum class Scheme { kTraditional, kAil, kDistill };
std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

enum class ImportanceInit { kTeacher, kOnes, kZeros, kRandom };
std::string importance_init_name(ImportanceInit i);
ImportanceInit importance_init_from_name(const std::string& name);

struct TrainConfig {
  int epochs_per_round = 50;
  int ail_epochs_per_round = 10;  // epochs_per_round / 5; keeps T rounds affordable
  int batch_size = 128;
  double lr_initial = 0.1;
  double lr_decay_factor = 10.0;
  int lr_decay_every = 10;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  double clip = 0.4;
  std::uint64_t seed = 0;
  bool warm_start = true;  // reuse previous round's parameters
  int threads = 1;

  void validate() const;
};

struct DistillConfig {
  double beta = 0.1;
  std::filesystem::path teacher_checkpoint;

  void validate() const {
    if (!(beta >= 0.0)) throw DomainError("distill: beta must be >= 0");
  }
};

struct EpochRecord {
  std::string phase;  // "init" or "ail"
  int round = 0;
  int epoch = 0;       // within the round
  double mean_loss = 0.0;
  double lr = 0.0;
  double wall_sec = 0.0;  // kept in memory, excluded from serialized logs
};

struct RoundRecord {
  int round = 0;
  double mean_importance = 0.0;
  double fraction_saturated = 0.0;
  double val_psnr = 0.0;
  double val_ssim = 0.0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  std::vector<RoundRecord> rounds;

  // Line-delimited JSON. Wall-clock fields are intentionally omitted so two
  // identical runs serialize byte-identically.
  void write_jsonl(std::ostream& out, const std::string& config_hash) const;
};

// Learning-rate schedule: lr_initial / decay_factor^floor(epoch / decay_every).
double lr_at(int epoch, const TrainConfig& cfg);

// Importance-weighted MSE. Weights multiply inside the squared error, so they
// enter squared:
//   loss = mean((w*y - w*y_hat)^2),  d(loss)/d(y_hat) = 2 w^2 (y_hat - y) / N.
struct LossAndGrad {
  double loss = 0.0;
  Tensor grad;
};
LossAndGrad weighted_mse(const Tensor& y, const Tensor& y_hat, const Tensor& w);

// Ground truth plus beta-weighted teacher matching:
//   loss = mean((y_hat - y)^2) + beta * mean((y_hat - t)^2).
LossAndGrad distill_loss(const Tensor& y, const Tensor& y_hat, const Tensor& t, double beta);

// Training data plus the held-out images used for per-round validation.
struct Dataset {
  std::vector<TrainingPair> pairs;
  int scale = 2;
  std::vector<std::pair<std::string, ImageY>> val_images;  // may be empty
};

// Per-sample per-pixel squared error of the network, inference mode.
// `threads` > 1 fans out across samples; output order follows data order.
std::vector<PixelLossMap> compute_residual_maps(const Network& net,
                                                const std::vector<TrainingPair>& pairs,
                                                int threads = 1);

// Per-sample per-pixel absolute error, used for teacher importance init.
std::vector<PixelLossMap> compute_teacher_error_maps(const Network& net,
                                                     const std::vector<TrainingPair>& pairs,
                                                     int threads = 1);

struct RunResult {
  Network net;
  TrainLog log;
};

struct RunHooks {
  // Called after each AIL round (including the init round 0) with the maps
  // that round trained against. Used to persist the importance store.
  std::function<void(int round, const std::vector<ImportanceMap>&)> on_round;
  std::ostream* progress = nullptr;  // human-readable progress lines
};

RunResult run_traditional(const ModelSpec& spec, const Dataset& data, const TrainConfig& cfg,
                          const RunHooks& hooks = {});

struct AilRunConfig {
  AilConfig ail;
  TeacherInitConfig teacher_init;
  ImportanceInit init = ImportanceInit::kTeacher;
};

RunResult run_ail(const ModelSpec& spec, const Dataset& data, const TrainConfig& cfg,
                  const AilRunConfig& acfg, const Network* teacher, const RunHooks& hooks = {});

RunResult run_distill(const ModelSpec& spec, const Dataset& data, const TrainConfig& cfg,
                      const DistillConfig& dcfg, const Network& teacher,
                      const RunHooks& hooks = {});

}  // namespace ailsr
