#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ailsr/errors.hpp"

namespace ailsr {

// Per-pixel training weights in [0,1] attached to one training patch.
struct ImportanceMap {
  std::string sample_id;
  int h = 0, w = 0;
  std::vector<double> weights;  // row-major, length h*w
  int iteration = 0;            // adaptive round that produced this map
};

// Per-pixel reconstruction loss of a network on one patch.
struct PixelLossMap {
  std::string sample_id;
  int h = 0, w = 0;
  std::vector<double> values;  // non-negative, finite
};

struct AilConfig {
  double lambda = 0.15;
  int iterations = 10;

  void validate() const {
    if (!(lambda > 0.0)) throw DomainError("ail: lambda must be > 0");
    if (iterations < 0) throw DomainError("ail: iterations must be >= 0");
  }
};

// Parameters of the teacher importance function
//   g(x) = z / (1 + exp((x - mu0) * alpha0)),  z = 1 + exp(-mu0 * alpha0).
// z is always derived, never stored.
struct TeacherInitConfig {
  double mu0 = 0.01;
  double alpha0 = 100.0;

  double z() const { return 1.0 + std::exp(-mu0 * alpha0); }
  void validate() const {
    if (!(alpha0 > 0.0)) throw DomainError("teacher_init: alpha0 must be > 0");
  }
};

// Increment penalty (w - w') * (ln((w - w') / lambda) - 1); its limit value 0
// is returned when w == w' (differences within 1e-15 count as equal).
double penalty_h(double w, double w_prev, double lambda);

// Constrained minimizer of f(w) = d*w + penalty_h(w, w', lambda) over [w', 1]:
//   min(1, w' + lambda * exp(-d)).
double importance_update(double w_prev, double d, double lambda);

// Elementwise importance_update; increments the iteration counter.
ImportanceMap update_map(const ImportanceMap& map, const PixelLossMap& losses,
                         const AilConfig& cfg);

// g applied elementwise to teacher reconstruction errors; iteration 0.
ImportanceMap importance_init_from_teacher(const PixelLossMap& errors,
                                           const TeacherInitConfig& cfg);

// All-ones map: collapses the weighted objective onto the traditional one.
ImportanceMap indicator_init(const std::string& sample_id, int h, int w);

ImportanceMap zero_init(const std::string& sample_id, int h, int w);
ImportanceMap random_init(const std::string& sample_id, int h, int w, std::uint64_t seed);

double mean_weight(const std::vector<ImportanceMap>& maps);
double fraction_saturated(const std::vector<ImportanceMap>& maps);  // weights exactly 1

// On-disk store: <dir>/index.json plus <dir>/data.bin holding one record per
// sample ([u32 h][u32 w][h*w little-endian doubles], offsets in the index).
void save_importance_store(const std::filesystem::path& dir,
                           const std::vector<ImportanceMap>& maps, int iteration,
                           const std::string& config_hash);
std::vector<ImportanceMap> load_importance_store(const std::filesystem::path& dir);

}  // namespace ailsr
