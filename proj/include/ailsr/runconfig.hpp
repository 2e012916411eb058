#pragma once

#include <filesystem>
#include <string>

#include "ailsr/training.hpp"

namespace ailsr {

// Fully resolved training-run configuration. Loaded from a single JSON
// document with a top-level "scheme" key; unknown keys are rejected at every
// level. The content hash of the resolved document is embedded in every
// artifact the run produces.
struct RunConfig {
  Scheme scheme = Scheme::kTraditional;
  ModelSpec model;
  TrainConfig train;
  AilRunConfig ail;
  DistillConfig distill;
  std::filesystem::path teacher_checkpoint;  // ail (init=teacher) and distill
  std::filesystem::path manifest_dir;
  std::filesystem::path val_images;  // optional
  std::filesystem::path out_dir;

  bool needs_teacher() const {
    return scheme == Scheme::kDistill ||
           (scheme == Scheme::kAil && ail.init == ImportanceInit::kTeacher);
  }

  // Canonical resolved document (defaults filled in, keys sorted).
  std::string canonical_json() const;
  std::string config_hash() const;
};

RunConfig parse_run_config(const std::string& json_text, const std::string& what);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace ailsr
