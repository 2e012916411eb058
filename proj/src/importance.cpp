#include "ailsr/importance.hpp"

#include <algorithm>

#include <json.hpp>

#include "ailsr/rng.hpp"
#include "ailsr/serial.hpp"

namespace ailsr {

double penalty_h(double w, double w_prev, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("penalty_h: lambda must be > 0");
  const double delta = w - w_prev;
  if (delta < -1e-15) {
    throw DomainError("penalty_h: w (" + std::to_string(w) + ") < w_prev (" +
                      std::to_string(w_prev) + ")");
  }
  if (delta <= 1e-15) return 0.0;  // limit of x*ln(x) at 0
  return delta * (std::log(delta / lambda) - 1.0);
}

double importance_update(double w_prev, double d, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("importance_update: lambda must be > 0");
  if (!(w_prev >= 0.0 && w_prev <= 1.0)) {
    throw DomainError("importance_update: w_prev must be in [0,1], got " + std::to_string(w_prev));
  }
  if (!(d >= 0.0)) {
    throw DomainError("importance_update: reconstruction loss must be >= 0, got " +
                      std::to_string(d));
  }
  return std::min(1.0, w_prev + lambda * std::exp(-d));
}

ImportanceMap update_map(const ImportanceMap& map, const PixelLossMap& losses,
                         const AilConfig& cfg) {
  cfg.validate();
  if (map.sample_id != losses.sample_id) {
    throw Error("update_map: importance map '" + map.sample_id + "' vs loss map '" +
                losses.sample_id + "'");
  }
  if (map.h != losses.h || map.w != losses.w) {
    throw ShapeError("update_map: map " + std::to_string(map.h) + "x" + std::to_string(map.w) +
                     " vs losses " + std::to_string(losses.h) + "x" + std::to_string(losses.w));
  }
  ImportanceMap out = map;
  for (std::size_t i = 0; i < out.weights.size(); ++i) {
    out.weights[i] = importance_update(map.weights[i], losses.values[i], cfg.lambda);
  }
  out.iteration = map.iteration + 1;
  return out;
}

ImportanceMap importance_init_from_teacher(const PixelLossMap& errors,
                                           const TeacherInitConfig& cfg) {
  cfg.validate();
  ImportanceMap out;
  out.sample_id = errors.sample_id;
  out.h = errors.h;
  out.w = errors.w;
  out.iteration = 0;
  out.weights.resize(errors.values.size());
  const double z = cfg.z();
  for (std::size_t i = 0; i < errors.values.size(); ++i) {
    const double x = errors.values[i];
    if (!(x >= 0.0)) throw DomainError("importance_init_from_teacher: negative error");
    out.weights[i] = z / (1.0 + std::exp((x - cfg.mu0) * cfg.alpha0));
  }
  return out;
}

ImportanceMap indicator_init(const std::string& sample_id, int h, int w) {
  ImportanceMap m;
  m.sample_id = sample_id;
  m.h = h;
  m.w = w;
  m.weights.assign(static_cast<std::size_t>(h) * w, 1.0);
  return m;
}

ImportanceMap zero_init(const std::string& sample_id, int h, int w) {
  ImportanceMap m;
  m.sample_id = sample_id;
  m.h = h;
  m.w = w;
  m.weights.assign(static_cast<std::size_t>(h) * w, 0.0);
  return m;
}

ImportanceMap random_init(const std::string& sample_id, int h, int w, std::uint64_t seed) {
  ImportanceMap m;
  m.sample_id = sample_id;
  m.h = h;
  m.w = w;
  m.weights.resize(static_cast<std::size_t>(h) * w);
  Rng rng(mix_seed(seed, fnv1a64(sample_id)));
  for (double& x : m.weights) x = rng.uniform();
  return m;
}

double mean_weight(const std::vector<ImportanceMap>& maps) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const ImportanceMap& m : maps) {
    for (double w : m.weights) sum += w;
    count += m.weights.size();
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double fraction_saturated(const std::vector<ImportanceMap>& maps) {
  std::size_t ones = 0, count = 0;
  for (const ImportanceMap& m : maps) {
    for (double w : m.weights) ones += w == 1.0 ? 1 : 0;
    count += m.weights.size();
  }
  return count == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(count);
}

void save_importance_store(const std::filesystem::path& dir,
                           const std::vector<ImportanceMap>& maps, int iteration,
                           const std::string& config_hash) {
  std::string data;
  nlohmann::json index;
  index["version"] = 1;
  index["iteration"] = iteration;
  index["config_hash"] = config_hash;
  index["count"] = maps.size();
  nlohmann::json records = nlohmann::json::array();
  for (const ImportanceMap& m : maps) {
    nlohmann::json rec;
    rec["id"] = m.sample_id;
    rec["h"] = m.h;
    rec["w"] = m.w;
    rec["offset"] = data.size();
    records.push_back(std::move(rec));
    put_u32(data, static_cast<std::uint32_t>(m.h));
    put_u32(data, static_cast<std::uint32_t>(m.w));
    put_f64_array(data, m.weights);
  }
  index["records"] = std::move(records);
  index["checksum"] = crc32_of(data);
  write_file(dir / "data.bin", data);
  write_file(dir / "index.json", index.dump(2) + "\n");
}

std::vector<ImportanceMap> load_importance_store(const std::filesystem::path& dir) {
  const std::string index_text = read_file(dir / "index.json");
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(index_text);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError((dir / "index.json").string() + ": " + e.what());
  }
  const std::string data = read_file(dir / "data.bin");
  try {
    if (index.at("version").get<int>() != 1) {
      throw VersionMismatchError((dir / "index.json").string() + ": unsupported store version");
    }
    if (index.at("checksum").get<std::uint32_t>() != crc32_of(data)) {
      throw CorruptFileError((dir / "data.bin").string() + ": checksum mismatch");
    }
    const int iteration = index.at("iteration").get<int>();
    std::vector<ImportanceMap> maps;
    for (const nlohmann::json& rec : index.at("records")) {
      ImportanceMap m;
      m.sample_id = rec.at("id").get<std::string>();
      m.iteration = iteration;
      const std::size_t offset = rec.at("offset").get<std::size_t>();
      if (offset > data.size()) {
        throw CorruptFileError((dir / "data.bin").string() + ": record offset out of range");
      }
      Cursor cur(std::string_view(data).substr(offset), (dir / "data.bin").string());
      m.h = static_cast<int>(cur.u32());
      m.w = static_cast<int>(cur.u32());
      if (m.h != rec.at("h").get<int>() || m.w != rec.at("w").get<int>()) {
        throw CorruptFileError((dir / "data.bin").string() + ": record shape disagrees with index");
      }
      m.weights.resize(static_cast<std::size_t>(m.h) * m.w);
      cur.f64_array(m.weights);
      maps.push_back(std::move(m));
    }
    return maps;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError((dir / "index.json").string() + ": " + e.what());
  }
}

}  // namespace ailsr
