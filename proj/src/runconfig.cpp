#include "ailsr/runconfig.hpp"

#include <set>

#include <json.hpp>

#include "ailsr/serial.hpp"

namespace ailsr {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw DomainError("config: unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw DomainError("config: bad value for '" + key + "'");
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const std::string& what) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DomainError(what + ": not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw DomainError(what + ": top level must be a JSON object");
  reject_unknown(j,
                 {"scheme", "model", "train", "ail", "teacher_init", "distill",
                  "teacher_checkpoint", "data", "out_dir"},
                 "top level");

  RunConfig cfg;
  if (!j.contains("scheme")) throw DomainError(what + ": missing required key 'scheme'");
  cfg.scheme = scheme_from_name(j.at("scheme").get<std::string>());

  if (j.contains("model")) {
    const json& m = j.at("model");
    reject_unknown(m, {"depth", "base_width", "ratio", "in_channels", "seed"}, "'model'");
    cfg.model.depth = get_or(m, "depth", cfg.model.depth);
    cfg.model.base_width = get_or(m, "base_width", cfg.model.base_width);
    cfg.model.ratio = get_or(m, "ratio", cfg.model.ratio);
    cfg.model.in_channels = get_or(m, "in_channels", cfg.model.in_channels);
    cfg.model.seed = get_or(m, "seed", cfg.model.seed);
  }
  cfg.model.validate();

  if (j.contains("train")) {
    const json& t = j.at("train");
    reject_unknown(t,
                   {"epochs_per_round", "ail_epochs_per_round", "batch_size", "lr_initial",
                    "lr_decay_factor", "lr_decay_every", "momentum", "weight_decay", "clip",
                    "seed", "warm_start", "threads"},
                   "'train'");
    cfg.train.epochs_per_round = get_or(t, "epochs_per_round", cfg.train.epochs_per_round);
    cfg.train.ail_epochs_per_round =
        get_or(t, "ail_epochs_per_round", cfg.train.ail_epochs_per_round);
    cfg.train.batch_size = get_or(t, "batch_size", cfg.train.batch_size);
    cfg.train.lr_initial = get_or(t, "lr_initial", cfg.train.lr_initial);
    cfg.train.lr_decay_factor = get_or(t, "lr_decay_factor", cfg.train.lr_decay_factor);
    cfg.train.lr_decay_every = get_or(t, "lr_decay_every", cfg.train.lr_decay_every);
    cfg.train.momentum = get_or(t, "momentum", cfg.train.momentum);
    cfg.train.weight_decay = get_or(t, "weight_decay", cfg.train.weight_decay);
    cfg.train.clip = get_or(t, "clip", cfg.train.clip);
    cfg.train.seed = get_or(t, "seed", cfg.train.seed);
    cfg.train.warm_start = get_or(t, "warm_start", cfg.train.warm_start);
    cfg.train.threads = get_or(t, "threads", cfg.train.threads);
  }
  cfg.train.validate();

  if (j.contains("ail")) {
    const json& a = j.at("ail");
    reject_unknown(a, {"lambda", "iterations", "init"}, "'ail'");
    cfg.ail.ail.lambda = get_or(a, "lambda", cfg.ail.ail.lambda);
    cfg.ail.ail.iterations = get_or(a, "iterations", cfg.ail.ail.iterations);
    cfg.ail.init = importance_init_from_name(
        get_or<std::string>(a, "init", importance_init_name(cfg.ail.init)));
  }
  cfg.ail.ail.validate();

  if (j.contains("teacher_init")) {
    const json& g = j.at("teacher_init");
    reject_unknown(g, {"mu0", "alpha0"}, "'teacher_init'");
    cfg.ail.teacher_init.mu0 = get_or(g, "mu0", cfg.ail.teacher_init.mu0);
    cfg.ail.teacher_init.alpha0 = get_or(g, "alpha0", cfg.ail.teacher_init.alpha0);
  }
  cfg.ail.teacher_init.validate();

  if (j.contains("distill")) {
    const json& d = j.at("distill");
    reject_unknown(d, {"beta"}, "'distill'");
    cfg.distill.beta = get_or(d, "beta", cfg.distill.beta);
  }
  cfg.distill.validate();

  if (j.contains("teacher_checkpoint")) {
    cfg.teacher_checkpoint = j.at("teacher_checkpoint").get<std::string>();
    cfg.distill.teacher_checkpoint = cfg.teacher_checkpoint;
  }

  if (!j.contains("data")) throw DomainError(what + ": missing required key 'data'");
  {
    const json& d = j.at("data");
    reject_unknown(d, {"manifest_dir", "val_images"}, "'data'");
    if (!d.contains("manifest_dir")) {
      throw DomainError(what + ": missing required key 'data.manifest_dir'");
    }
    cfg.manifest_dir = d.at("manifest_dir").get<std::string>();
    if (d.contains("val_images")) cfg.val_images = d.at("val_images").get<std::string>();
  }

  if (!j.contains("out_dir")) throw DomainError(what + ": missing required key 'out_dir'");
  cfg.out_dir = j.at("out_dir").get<std::string>();

  if (cfg.needs_teacher() && cfg.teacher_checkpoint.empty()) {
    throw DomainError(what + ": scheme '" + scheme_name(cfg.scheme) +
                      "' requires 'teacher_checkpoint'" +
                      (cfg.scheme == Scheme::kAil ? " (importance init 'teacher')" : ""));
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_file(path), path.string());
}

std::string RunConfig::canonical_json() const {
  json j;
  j["scheme"] = scheme_name(scheme);
  j["model"] = {{"depth", model.depth},
                {"base_width", model.base_width},
                {"ratio", model.ratio},
                {"in_channels", model.in_channels},
                {"seed", model.seed}};
  j["train"] = {{"epochs_per_round", train.epochs_per_round},
                {"ail_epochs_per_round", train.ail_epochs_per_round},
                {"batch_size", train.batch_size},
                {"lr_initial", train.lr_initial},
                {"lr_decay_factor", train.lr_decay_factor},
                {"lr_decay_every", train.lr_decay_every},
                {"momentum", train.momentum},
                {"weight_decay", train.weight_decay},
                {"clip", train.clip},
                {"seed", train.seed},
                {"warm_start", train.warm_start},
                {"threads", train.threads}};
  j["ail"] = {{"lambda", ail.ail.lambda},
              {"iterations", ail.ail.iterations},
              {"init", importance_init_name(ail.init)}};
  j["teacher_init"] = {{"mu0", ail.teacher_init.mu0}, {"alpha0", ail.teacher_init.alpha0}};
  j["distill"] = {{"beta", distill.beta}};
  j["teacher_checkpoint"] = teacher_checkpoint.string();
  j["data"] = {{"manifest_dir", manifest_dir.string()}, {"val_images", val_images.string()}};
  j["out_dir"] = out_dir.string();
  return j.dump(2) + "\n";
}

std::string RunConfig::config_hash() const { return to_hex(fnv1a64(canonical_json())); }

}  // namespace ailsr
