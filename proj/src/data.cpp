#include "ailsr/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "ailsr/image_io.hpp"
#include "ailsr/serial.hpp"

namespace ailsr {

namespace {

std::string format_ratio(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", s);
  return buf;
}

}  // namespace

void AugmentSpec::validate() const {
  if (scales.empty()) throw DomainError("augment: scale set must be non-empty");
  for (double s : scales) {
    if (!(s > 0.0 && s <= 1.0)) {
      throw DomainError("augment: scale ratio " + format_ratio(s) + " outside (0,1]");
    }
  }
  for (int r : rotations) {
    if (r != 90 && r != 180 && r != 270) {
      throw DomainError("augment: rotation " + std::to_string(r) + " not one of 90/180/270");
    }
  }
}

std::vector<std::pair<std::string, ImageY>> augment(const ImageY& hr, const AugmentSpec& spec) {
  spec.validate();
  std::vector<std::pair<std::string, ImageY>> out;
  out.reserve(spec.variants_per_image());
  for (double s : spec.scales) {
    const ImageY base = s == 1.0 ? hr : bicubic_resize(hr, s);
    std::vector<std::pair<std::string, ImageY>> variants;
    variants.emplace_back("s" + format_ratio(s) + ":r0", base);
    for (int r : spec.rotations) {
      variants.emplace_back("s" + format_ratio(s) + ":r" + std::to_string(r),
                            rotate90(base, r / 90));
    }
    if (spec.flip) {
      const std::size_t unflipped = variants.size();
      for (std::size_t i = 0; i < unflipped; ++i) {
        variants.emplace_back(variants[i].first + "f", flip_horizontal(variants[i].second));
      }
    }
    for (auto& v : variants) out.push_back(std::move(v));
  }
  return out;
}

TrainingPair make_pair(const std::string& id, const ImageY& hr, int scale) {
  if (scale < 1) throw DomainError("make_pair: scale must be >= 1");
  const int ch = (hr.h / scale) * scale;
  const int cw = (hr.w / scale) * scale;
  if (ch < scale || cw < scale) {
    throw ShapeError("make_pair: image " + std::to_string(hr.h) + "x" + std::to_string(hr.w) +
                     " smaller than scale " + std::to_string(scale));
  }
  TrainingPair pair;
  pair.id = id;
  pair.scale = scale;
  pair.y = center_crop(hr, ch, cw);
  if (scale == 1) {
    pair.x = pair.y;
  } else {
    const ImageY lr = bicubic_resize_to(pair.y, ch / scale, cw / scale);
    pair.x = bicubic_resize_to(lr, ch, cw);
  }
  return pair;
}

std::vector<TrainingPair> extract_patches(const TrainingPair& pair, int size, int stride) {
  if (size < 1 || stride < 1) throw DomainError("extract_patches: size and stride must be >= 1");
  if (size > pair.y.h || size > pair.y.w) {
    throw ShapeError("extract_patches: patch size " + std::to_string(size) + " exceeds image " +
                     std::to_string(pair.y.h) + "x" + std::to_string(pair.y.w));
  }
  std::vector<TrainingPair> patches;
  for (int y0 = 0; y0 + size <= pair.y.h; y0 += stride) {
    for (int x0 = 0; x0 + size <= pair.y.w; x0 += stride) {
      TrainingPair p;
      p.id = pair.id + ":y" + std::to_string(y0) + ":x" + std::to_string(x0);
      p.scale = pair.scale;
      p.x = ImageY(size, size);
      p.y = ImageY(size, size);
      for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
          p.x.at(y, x) = pair.x.at(y0 + y, x0 + x);
          p.y.at(y, x) = pair.y.at(y0 + y, x0 + x);
        }
      }
      patches.push_back(std::move(p));
    }
  }
  return patches;
}

PatchIdParts parse_patch_id(const std::string& id) {
  // <source>:s<ratio>:r<deg>[f]:y<row>:x<col>
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= id.size(); ++i) {
    if (i == id.size() || id[i] == ':') {
      parts.push_back(id.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 5 || parts[1].empty() || parts[1][0] != 's' || parts[2].empty() ||
      parts[2][0] != 'r' || parts[3].empty() || parts[3][0] != 'y' || parts[4].empty() ||
      parts[4][0] != 'x') {
    throw Error("unparseable patch id '" + id + "'");
  }
  PatchIdParts out;
  out.source = parts[0];
  try {
    out.scale_ratio = std::stod(parts[1].substr(1));
    std::string rot = parts[2].substr(1);
    if (!rot.empty() && rot.back() == 'f') {
      out.flipped = true;
      rot.pop_back();
    }
    out.rotation = std::stoi(rot);
    out.row = std::stoi(parts[3].substr(1));
    out.col = std::stoi(parts[4].substr(1));
  } catch (const Error&) {
    throw;
  } catch (...) {
    throw Error("unparseable patch id '" + id + "'");
  }
  return out;
}

namespace {

nlohmann::json augment_to_json(const AugmentSpec& a) {
  return {{"rotations", a.rotations}, {"flip", a.flip}, {"scales", a.scales}};
}

AugmentSpec augment_from_json(const nlohmann::json& j) {
  AugmentSpec a;
  a.rotations = j.at("rotations").get<std::vector<int>>();
  a.flip = j.at("flip").get<bool>();
  a.scales = j.at("scales").get<std::vector<double>>();
  return a;
}

}  // namespace

DatasetManifest build_manifest(const std::filesystem::path& image_dir, int scale,
                               const AugmentSpec& augmentation, int patch_size, int stride,
                               std::uint64_t seed, const std::filesystem::path& out_dir) {
  augmentation.validate();
  if (scale < 1) throw DomainError("build_manifest: scale must be >= 1");
  if (!std::filesystem::is_directory(image_dir)) {
    throw IoError("image directory not found: " + image_dir.string());
  }

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(image_dir)) {
    if (entry.is_regular_file() && has_image_extension(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  if (files.empty()) {
    throw IoError("no decodable images (png/ppm/pgm) in " + image_dir.string());
  }

  DatasetManifest manifest;
  manifest.scale = scale;
  manifest.patch_size = patch_size;
  manifest.stride = stride;
  manifest.augmentation = augmentation;
  manifest.seed = seed;

  std::string blob;
  for (const std::filesystem::path& file : files) {
    const ImageY hr = rgb_to_y(load_image(file));
    manifest.sources.push_back(file.filename().string());
    const std::string stem = file.stem().string();
    for (const auto& [tag, variant] : augment(hr, augmentation)) {
      const TrainingPair pair = make_pair(stem + ":" + tag, variant, scale);
      if (pair.y.h < patch_size || pair.y.w < patch_size) continue;  // variant too small
      for (const TrainingPair& patch : extract_patches(pair, patch_size, stride)) {
        manifest.records.push_back({patch.id, blob.size()});
        put_u32(blob, static_cast<std::uint32_t>(patch.y.h));
        put_u32(blob, static_cast<std::uint32_t>(patch.y.w));
        put_f64_array(blob, patch.x.v);
        put_f64_array(blob, patch.y.v);
      }
    }
  }
  if (manifest.records.empty()) {
    throw IoError("no usable patches: every image/variant is smaller than patch size " +
                  std::to_string(patch_size));
  }
  manifest.checksum = crc32_of(blob);

  nlohmann::json j;
  j["version"] = manifest.version;
  j["scale"] = manifest.scale;
  j["patch_size"] = manifest.patch_size;
  j["stride"] = manifest.stride;
  j["augmentation"] = augment_to_json(manifest.augmentation);
  j["seed"] = manifest.seed;
  j["sources"] = manifest.sources;
  j["checksum"] = manifest.checksum;
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : manifest.records) {
    records.push_back({{"id", rec.id}, {"offset", rec.offset}});
  }
  j["records"] = std::move(records);

  write_file(out_dir / "patches.bin", blob);
  write_file(out_dir / "manifest.json", j.dump(2) + "\n");
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& dir) {
  const std::filesystem::path path = dir / "manifest.json";
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError(path.string() + ": " + e.what());
  }
  DatasetManifest m;
  try {
    m.version = j.at("version").get<int>();
    if (m.version != 1) {
      throw VersionMismatchError(path.string() + ": unsupported manifest version " +
                                 std::to_string(m.version));
    }
    m.scale = j.at("scale").get<int>();
    m.patch_size = j.at("patch_size").get<int>();
    m.stride = j.at("stride").get<int>();
    m.augmentation = augment_from_json(j.at("augmentation"));
    m.seed = j.at("seed").get<std::uint64_t>();
    m.sources = j.at("sources").get<std::vector<std::string>>();
    m.checksum = j.at("checksum").get<std::uint32_t>();
    for (const nlohmann::json& rec : j.at("records")) {
      m.records.push_back({rec.at("id").get<std::string>(), rec.at("offset").get<std::uint64_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError(path.string() + ": " + e.what());
  }
  return m;
}

std::vector<TrainingPair> load_pairs(const std::filesystem::path& dir) {
  const DatasetManifest m = load_manifest(dir);
  const std::filesystem::path bin_path = dir / "patches.bin";
  const std::string blob = read_file(bin_path);
  if (crc32_of(blob) != m.checksum) {
    throw CorruptFileError(bin_path.string() + ": checksum mismatch with manifest");
  }
  std::vector<TrainingPair> pairs;
  pairs.reserve(m.records.size());
  for (const auto& rec : m.records) {
    if (rec.offset > blob.size()) {
      throw CorruptFileError(bin_path.string() + ": record offset out of range");
    }
    Cursor cur(std::string_view(blob).substr(rec.offset), bin_path.string());
    TrainingPair p;
    p.id = rec.id;
    p.scale = m.scale;
    const int h = static_cast<int>(cur.u32());
    const int w = static_cast<int>(cur.u32());
    p.x = ImageY(h, w);
    p.y = ImageY(h, w);
    cur.f64_array(p.x.v);
    cur.f64_array(p.y.v);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<std::pair<std::string, ImageY>> load_eval_images(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("image directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && has_image_extension(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  std::vector<std::pair<std::string, ImageY>> images;
  for (const auto& file : files) {
    images.emplace_back(file.stem().string(), rgb_to_y(load_image(file)));
  }
  if (images.empty()) throw IoError("no decodable images (png/ppm/pgm) in " + dir.string());
  return images;
}

}  // namespace ailsr
