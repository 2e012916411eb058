#include "ailsr/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "ailsr/metrics.hpp"
#include "ailsr/rng.hpp"

namespace ailsr {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kTraditional: return "traditional";
    case Scheme::kAil: return "ail";
    case Scheme::kDistill: return "distill";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "traditional") return Scheme::kTraditional;
  if (name == "ail") return Scheme::kAil;
  if (name == "distill") return Scheme::kDistill;
  throw DomainError("unknown scheme '" + name + "' (traditional/ail/distill)");
}

std::string importance_init_name(ImportanceInit i) {
  switch (i) {
    case ImportanceInit::kTeacher: return "teacher";
    case ImportanceInit::kOnes: return "ones";
    case ImportanceInit::kZeros: return "zeros";
    case ImportanceInit::kRandom: return "random";
  }
  return "?";
}

ImportanceInit importance_init_from_name(const std::string& name) {
  if (name == "teacher") return ImportanceInit::kTeacher;
  if (name == "ones") return ImportanceInit::kOnes;
  if (name == "zeros") return ImportanceInit::kZeros;
  if (name == "random") return ImportanceInit::kRandom;
  throw DomainError("unknown importance init '" + name + "' (teacher/ones/zeros/random)");
}

void TrainConfig::validate() const {
  if (epochs_per_round < 1) throw DomainError("train: epochs_per_round must be >= 1");
  if (ail_epochs_per_round < 1) throw DomainError("train: ail_epochs_per_round must be >= 1");
  if (batch_size < 1) throw DomainError("train: batch_size must be >= 1");
  if (!(lr_initial > 0.0)) throw DomainError("train: lr_initial must be > 0");
  if (!(lr_decay_factor > 0.0)) throw DomainError("train: lr_decay_factor must be > 0");
  if (lr_decay_every < 1) throw DomainError("train: lr_decay_every must be >= 1");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw DomainError("train: momentum must be in [0,1)");
  if (!(weight_decay >= 0.0)) throw DomainError("train: weight_decay must be >= 0");
  if (!(clip > 0.0)) throw DomainError("train: clip must be > 0");
  if (threads < 1) throw DomainError("train: threads must be >= 1");
}

double lr_at(int epoch, const TrainConfig& cfg) {
  if (epoch < 0) throw DomainError("lr_at: epoch must be >= 0");
  return cfg.lr_initial / std::pow(cfg.lr_decay_factor, epoch / cfg.lr_decay_every);
}

LossAndGrad weighted_mse(const Tensor& y, const Tensor& y_hat, const Tensor& w) {
  if (!y.same_shape(y_hat) || !y.same_shape(w)) {
    throw ShapeError("weighted_mse: shapes " + y.shape_str() + " / " + y_hat.shape_str() + " / " +
                     w.shape_str() + " differ");
  }
  LossAndGrad out;
  out.grad = Tensor(y.n, y.c, y.h, y.w);
  const double n = static_cast<double>(y.numel());
  double loss = 0.0;
  for (std::size_t i = 0; i < y.v.size(); ++i) {
    const double wi = w.v[i];
    const double r = wi * y.v[i] - wi * y_hat.v[i];
    loss += r * r;
    out.grad.v[i] = 2.0 * (wi * wi) * (y_hat.v[i] - y.v[i]) / n;
  }
  out.loss = loss / n;
  return out;
}

LossAndGrad distill_loss(const Tensor& y, const Tensor& y_hat, const Tensor& t, double beta) {
  if (!y.same_shape(y_hat) || !y.same_shape(t)) {
    throw ShapeError("distill_loss: shapes " + y.shape_str() + " / " + y_hat.shape_str() + " / " +
                     t.shape_str() + " differ");
  }
  if (!(beta >= 0.0)) throw DomainError("distill_loss: beta must be >= 0");
  LossAndGrad out;
  out.grad = Tensor(y.n, y.c, y.h, y.w);
  const double n = static_cast<double>(y.numel());
  double loss_gt = 0.0, loss_teacher = 0.0;
  for (std::size_t i = 0; i < y.v.size(); ++i) {
    const double rg = y.v[i] - y_hat.v[i];
    const double rt = t.v[i] - y_hat.v[i];
    loss_gt += rg * rg;
    loss_teacher += rt * rt;
    out.grad.v[i] = 2.0 * (y_hat.v[i] - y.v[i]) / n + beta * (2.0 * (y_hat.v[i] - t.v[i]) / n);
  }
  out.loss = loss_gt / n + beta * (loss_teacher / n);
  return out;
}

namespace {

Tensor image_to_tensor(const ImageY& img) {
  Tensor t(1, 1, img.h, img.w);
  t.v = img.v;
  return t;
}

void check_uniform_patches(const std::vector<TrainingPair>& pairs) {
  if (pairs.empty()) throw Error("training: empty dataset");
  for (const TrainingPair& p : pairs) {
    if (p.y.h != pairs[0].y.h || p.y.w != pairs[0].y.w) {
      throw ShapeError("training: patches have mixed sizes ('" + pairs[0].id + "' is " +
                       std::to_string(pairs[0].y.h) + "x" + std::to_string(pairs[0].y.w) +
                       ", '" + p.id + "' is " + std::to_string(p.y.h) + "x" +
                       std::to_string(p.y.w) + ")");
    }
  }
}

Tensor stack_planes(const std::vector<const std::vector<double>*>& planes, int h, int w) {
  Tensor t(static_cast<int>(planes.size()), 1, h, w);
  double* dst = t.v.data();
  for (const std::vector<double>* p : planes) {
    std::copy(p->begin(), p->end(), dst);
    dst += p->size();
  }
  return t;
}

// Per-sample inference fan-out with a deterministic output order.
template <typename Fn>
void for_each_sample(std::size_t count, int threads, Fn&& fn) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next >= count) return;
          i = next++;
        }
        fn(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

struct PhaseSpec {
  std::string phase;  // "init" or "ail"
  int round = 0;
  int epochs = 0;
};

// One alternation block: trains the network for phase.epochs epochs against
// either importance maps (weighted MSE) or precomputed teacher targets
// (distillation). The learning-rate schedule restarts at each phase and the
// momentum buffers start from zero.
void train_phase(Network& net, const std::vector<TrainingPair>& pairs,
                 const std::vector<ImportanceMap>* maps, const std::vector<Tensor>* teacher_out,
                 double beta, const TrainConfig& cfg, const PhaseSpec& phase, TrainLog& log,
                 const RunHooks& hooks) {
  check_uniform_patches(pairs);
  const int ph = pairs[0].y.h, pw = pairs[0].y.w;
  if (maps != nullptr) {
    if (maps->size() != pairs.size()) throw Error("training: importance map count mismatch");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const ImportanceMap& m = (*maps)[i];
      if (m.sample_id != pairs[i].id) {
        throw Error("training: importance map '" + m.sample_id + "' does not match sample '" +
                    pairs[i].id + "'");
      }
      if (m.h != ph || m.w != pw) throw ShapeError("training: importance map shape mismatch");
    }
  }

  OptimizerState opt;
  opt.momentum = cfg.momentum;
  opt.weight_decay = cfg.weight_decay;
  opt.clip = cfg.clip;

  NetworkGrads grads;
  grads.init_like(net);
  std::vector<ParamView> views = param_views(net, grads);

  std::vector<std::size_t> order(pairs.size());

  for (int epoch = 0; epoch < phase.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const double lr = lr_at(epoch, cfg);
    opt.lr = lr;

    // fresh permutation per epoch, fully determined by (seed, round, epoch)
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle_rng(mix_seed(cfg.seed, 0x0badc0de5eedULL, static_cast<std::uint64_t>(phase.round),
                             static_cast<std::uint64_t>(epoch)));
    deterministic_shuffle(order, shuffle_rng);

    double loss_weighted_sum = 0.0;
    std::size_t item_count = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::vector<const std::vector<double>*> xs, ys, ws, ts;
      for (std::size_t k = start; k < end; ++k) {
        xs.push_back(&pairs[order[k]].x.v);
        ys.push_back(&pairs[order[k]].y.v);
        if (maps != nullptr) ws.push_back(&(*maps)[order[k]].weights);
        if (teacher_out != nullptr) ts.push_back(&(*teacher_out)[order[k]].v);
      }
      const Tensor x = stack_planes(xs, ph, pw);
      const Tensor y = stack_planes(ys, ph, pw);

      ForwardTrace trace = forward_train(net, x);
      LossAndGrad lg;
      if (maps != nullptr) {
        lg = weighted_mse(y, trace.output, stack_planes(ws, ph, pw));
      } else {
        lg = distill_loss(y, trace.output, stack_planes(ts, ph, pw), beta);
      }
      backward(net, trace, lg.grad, grads);
      sgd_step(views, opt);

      loss_weighted_sum += lg.loss * static_cast<double>(end - start);
      item_count += end - start;
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EpochRecord rec;
    rec.phase = phase.phase;
    rec.round = phase.round;
    rec.epoch = epoch;
    rec.mean_loss = loss_weighted_sum / static_cast<double>(item_count);
    rec.lr = lr;
    rec.wall_sec = wall;
    log.epochs.push_back(rec);
    if (hooks.progress != nullptr) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "[%s round %d] epoch %3d  loss %.8f  lr %g  (%.2fs)\n",
                    phase.phase.c_str(), phase.round, epoch, rec.mean_loss, lr, wall);
      (*hooks.progress) << buf << std::flush;
    }
  }
}

void add_round_record(TrainLog& log, int round, const std::vector<ImportanceMap>& maps,
                      const Network& net, const Dataset& data, const TrainConfig& cfg,
                      const RunHooks& hooks) {
  RoundRecord rec;
  rec.round = round;
  rec.mean_importance = mean_weight(maps);
  rec.fraction_saturated = fraction_saturated(maps);
  if (!data.val_images.empty()) {
    const EvalResult r = evaluate(net, data.val_images, data.scale, "val", cfg.threads);
    rec.val_psnr = r.mean_psnr;
    rec.val_ssim = r.mean_ssim;
  }
  log.rounds.push_back(rec);
  if (hooks.progress != nullptr) {
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "[round %d] mean importance %.6f  saturated %.4f  val PSNR %.4f  SSIM %.6f\n",
                  round, rec.mean_importance, rec.fraction_saturated, rec.val_psnr, rec.val_ssim);
    (*hooks.progress) << buf << std::flush;
  }
}

std::vector<PixelLossMap> error_maps(const Network& net, const std::vector<TrainingPair>& pairs,
                                     int threads, bool squared) {
  std::vector<PixelLossMap> maps(pairs.size());
  for_each_sample(pairs.size(), threads, [&](std::size_t i) {
    const TrainingPair& p = pairs[i];
    const Tensor out = forward(net, image_to_tensor(p.x));
    PixelLossMap m;
    m.sample_id = p.id;
    m.h = p.y.h;
    m.w = p.y.w;
    m.values.resize(p.y.v.size());
    for (std::size_t k = 0; k < m.values.size(); ++k) {
      const double r = out.v[k] - p.y.v[k];
      m.values[k] = squared ? r * r : std::abs(r);
    }
    maps[i] = std::move(m);
  });
  return maps;
}

}  // namespace

std::vector<PixelLossMap> compute_residual_maps(const Network& net,
                                                const std::vector<TrainingPair>& pairs,
                                                int threads) {
  return error_maps(net, pairs, threads, /*squared=*/true);
}

std::vector<PixelLossMap> compute_teacher_error_maps(const Network& net,
                                                     const std::vector<TrainingPair>& pairs,
                                                     int threads) {
  return error_maps(net, pairs, threads, /*squared=*/false);
}

RunResult run_traditional(const ModelSpec& spec, const Dataset& data, const TrainConfig& cfg,
                          const RunHooks& hooks) {
  cfg.validate();
  if (data.pairs.empty()) throw Error("run_traditional: empty dataset");
  RunResult result;
  result.net = build_network(spec);
  std::vector<ImportanceMap> maps;
  maps.reserve(data.pairs.size());
  for (const TrainingPair& p : data.pairs) {
    maps.push_back(indicator_init(p.id, p.y.h, p.y.w));
  }
  train_phase(result.net, data.pairs, &maps, nullptr, 0.0, cfg,
              {"init", 0, cfg.epochs_per_round}, result.log, hooks);
  return result;
}

RunResult run_ail(const ModelSpec& spec, const Dataset& data, const TrainConfig& cfg,
                  const AilRunConfig& acfg, const Network* teacher, const RunHooks& hooks) {
  cfg.validate();
  acfg.ail.validate();
  acfg.teacher_init.validate();
  if (data.pairs.empty()) throw Error("run_ail: empty dataset");
  if (acfg.init == ImportanceInit::kTeacher && teacher == nullptr) {
    throw Error("run_ail: teacher-based importance initialization requires a teacher network");
  }

  RunResult result;
  result.net = build_network(spec);

  // Phase 1: importance initialization, then one weighted training block.
  std::vector<ImportanceMap> maps;
  maps.reserve(data.pairs.size());
  switch (acfg.init) {
    case ImportanceInit::kTeacher: {
      const std::vector<PixelLossMap> errors =
          compute_teacher_error_maps(*teacher, data.pairs, cfg.threads);
      for (const PixelLossMap& e : errors) {
        maps.push_back(importance_init_from_teacher(e, acfg.teacher_init));
      }
      break;
    }
    case ImportanceInit::kOnes:
      for (const TrainingPair& p : data.pairs) maps.push_back(indicator_init(p.id, p.y.h, p.y.w));
      break;
    case ImportanceInit::kZeros:
      for (const TrainingPair& p : data.pairs) maps.push_back(zero_init(p.id, p.y.h, p.y.w));
      break;
    case ImportanceInit::kRandom:
      for (const TrainingPair& p : data.pairs) {
        maps.push_back(random_init(p.id, p.y.h, p.y.w, cfg.seed));
      }
      break;
  }

  train_phase(result.net, data.pairs, &maps, nullptr, 0.0, cfg,
              {"init", 0, cfg.epochs_per_round}, result.log, hooks);
  if (hooks.on_round) hooks.on_round(0, maps);
  add_round_record(result.log, 0, maps, result.net, data, cfg, hooks);

  // Phase 2: alternate the closed-form importance update with retraining.
  for (int t = 1; t <= acfg.ail.iterations; ++t) {
    const std::vector<PixelLossMap> residuals =
        compute_residual_maps(result.net, data.pairs, cfg.threads);
    std::vector<ImportanceMap> updated;
    updated.reserve(maps.size());
    for (std::size_t i = 0; i < maps.size(); ++i) {
      updated.push_back(update_map(maps[i], residuals[i], acfg.ail));
    }
    maps = std::move(updated);

    if (!cfg.warm_start) result.net = build_network(spec);
    train_phase(result.net, data.pairs, &maps, nullptr, 0.0, cfg,
                {"ail", t, cfg.ail_epochs_per_round}, result.log, hooks);
    if (hooks.on_round) hooks.on_round(t, maps);
    add_round_record(result.log, t, maps, result.net, data, cfg, hooks);
  }
  return result;
}

RunResult run_distill(const ModelSpec& spec, const Dataset& data, const TrainConfig& cfg,
                      const DistillConfig& dcfg, const Network& teacher, const RunHooks& hooks) {
  cfg.validate();
  dcfg.validate();
  if (data.pairs.empty()) throw Error("run_distill: empty dataset");

  // Teacher targets are fixed for the whole run.
  std::vector<Tensor> targets(data.pairs.size());
  for_each_sample(data.pairs.size(), cfg.threads, [&](std::size_t i) {
    targets[i] = forward(teacher, image_to_tensor(data.pairs[i].x));
  });

  RunResult result;
  result.net = build_network(spec);
  train_phase(result.net, data.pairs, nullptr, &targets, dcfg.beta, cfg,
              {"init", 0, cfg.epochs_per_round}, result.log, hooks);
  return result;
}

void TrainLog::write_jsonl(std::ostream& out, const std::string& config_hash) const {
  nlohmann::json header;
  header["type"] = "run";
  header["config_hash"] = config_hash;
  out << header.dump() << "\n";
  for (const EpochRecord& e : epochs) {
    nlohmann::json j;
    j["type"] = "epoch";
    j["phase"] = e.phase;
    j["round"] = e.round;
    j["epoch"] = e.epoch;
    j["mean_loss"] = e.mean_loss;
    j["lr"] = e.lr;
    out << j.dump() << "\n";
  }
  for (const RoundRecord& r : rounds) {
    nlohmann::json j;
    j["type"] = "round";
    j["round"] = r.round;
    j["mean_importance"] = r.mean_importance;
    j["fraction_saturated"] = r.fraction_saturated;
    j["val_psnr"] = r.val_psnr;
    j["val_ssim"] = r.val_ssim;
    out << j.dump() << "\n";
  }
}

}  // namespace ailsr
