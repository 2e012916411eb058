#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ailsr/image.hpp"

namespace ailsr {

// Pre-upsampled LR input x and HR target y; identical shapes.
struct TrainingPair {
  std::string id;
  ImageY x;
  ImageY y;
  int scale = 2;
};

struct AugmentSpec {
  std::vector<int> rotations;          // subset of {90, 180, 270}
  bool flip = false;
  std::vector<double> scales = {1.0};  // downsampling ratios, e.g. {1.0, 0.7, 0.5}

  void validate() const;
  std::size_t variants_per_image() const {
    return scales.size() * (1 + rotations.size()) * (flip ? 2u : 1u);
  }
  static AugmentSpec none() { return AugmentSpec{}; }
  static AugmentSpec full() { return AugmentSpec{{90, 180, 270}, true, {1.0, 0.7, 0.5}}; }
};

// Deterministic ordered list of (tag, variant): for each scale ratio the
// rescaled image, its selected rotations, then (optionally) the horizontally
// flipped copies of those. The identity variant is always first.
std::vector<std::pair<std::string, ImageY>> augment(const ImageY& hr, const AugmentSpec& spec);

// Center-crops hr to a multiple of `scale`, then synthesizes the
// pre-upsampled input x = bicubic_up(bicubic_down(y, 1/scale), scale).
TrainingPair make_pair(const std::string& id, const ImageY& hr, int scale);

// Aligned x/y crops on a regular grid; ids append ":y<row>:x<col>".
std::vector<TrainingPair> extract_patches(const TrainingPair& pair, int size, int stride);

struct PatchIdParts {
  std::string source;
  double scale_ratio = 1.0;
  int rotation = 0;
  bool flipped = false;
  int row = 0, col = 0;
};
PatchIdParts parse_patch_id(const std::string& id);

struct DatasetManifest {
  int version = 1;
  int scale = 2;
  int patch_size = 41;
  int stride = 41;
  AugmentSpec augmentation;
  std::uint64_t seed = 0;
  std::vector<std::string> sources;  // file names, sorted
  struct Record {
    std::string id;
    std::uint64_t offset = 0;  // into patches.bin
  };
  std::vector<Record> records;
  std::uint32_t checksum = 0;  // crc32 of patches.bin
};

// Decodes every image in `image_dir` (sorted by name), applies the
// augmentation recipe, extracts patches and writes <out_dir>/manifest.json
// plus <out_dir>/patches.bin. Fully deterministic: identical inputs and seed
// produce identical bytes.
DatasetManifest build_manifest(const std::filesystem::path& image_dir, int scale,
                               const AugmentSpec& augmentation, int patch_size, int stride,
                               std::uint64_t seed, const std::filesystem::path& out_dir);

DatasetManifest load_manifest(const std::filesystem::path& dir);
std::vector<TrainingPair> load_pairs(const std::filesystem::path& dir);

// HR evaluation images, sorted by file name; ids are the file stems.
std::vector<std::pair<std::string, ImageY>> load_eval_images(const std::filesystem::path& dir);

}  // namespace ailsr
