#include "ailsr/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "ailsr/rng.hpp"
#include "ailsr/serial.hpp"

namespace ailsr {

namespace {

constexpr char kCheckpointMagic[8] = {'A', 'I', 'L', 'S', 'R', 'C', 'P', '1'};
constexpr std::uint32_t kCheckpointVersion = 1;

}  // namespace

int ModelSpec::width() const {
  return static_cast<int>(std::floor(base_width * (1.0 - ratio) + 0.5));
}

void ModelSpec::validate() const {
  if (depth < 3) throw DomainError("model: depth must be >= 3 (got " + std::to_string(depth) + ")");
  if (base_width < 1) throw DomainError("model: base_width must be >= 1");
  if (!(ratio >= 0.0 && ratio < 1.0)) throw DomainError("model: ratio must be in [0,1)");
  if (in_channels < 1) throw DomainError("model: in_channels must be >= 1");
  if (width() < 1) {
    throw DomainError("model: derived width " + std::to_string(width()) +
                      " < 1 (base_width=" + std::to_string(base_width) +
                      ", ratio=" + std::to_string(ratio) + ")");
  }
}

Network build_network(const ModelSpec& spec) {
  spec.validate();
  const int f = spec.width();
  Network net;
  net.spec = spec;
  net.layers.reserve(static_cast<std::size_t>(spec.depth));
  for (int i = 0; i < spec.depth; ++i) {
    const int ic = i == 0 ? spec.in_channels : f;
    const int oc = i == spec.depth - 1 ? spec.in_channels : f;
    ConvParams layer(oc, ic, 3, 3);
    const double stddev = std::sqrt(2.0 / (ic * 3.0 * 3.0));
    Rng rng(mix_seed(spec.seed, 0x6e657477 /* layer stream */, static_cast<std::uint64_t>(i)));
    for (double& w : layer.weights) w = stddev * rng.normal();
    // biases stay zero
    net.layers.push_back(std::move(layer));
  }
  return net;
}

namespace {

void check_input_channels(const Network& net, const Tensor& x) {
  if (x.c != net.spec.in_channels) {
    throw ShapeError("forward: input has " + std::to_string(x.c) + " channels, network expects " +
                     std::to_string(net.spec.in_channels));
  }
}

}  // namespace

Tensor forward(const Network& net, const Tensor& x) {
  check_input_channels(net, x);
  Tensor t = conv2d_forward(x, net.layers[0], 1);
  for (std::size_t i = 1; i < net.layers.size(); ++i) {
    t = relu_forward(t);
    t = conv2d_forward(t, net.layers[i], 1);
  }
  for (std::size_t k = 0; k < t.v.size(); ++k) t.v[k] += x.v[k];
  return t;
}

ForwardTrace forward_train(const Network& net, const Tensor& x) {
  check_input_channels(net, x);
  ForwardTrace trace;
  trace.input = x;
  trace.pre.reserve(net.layers.size());
  trace.pre.push_back(conv2d_forward(x, net.layers[0], 1));
  for (std::size_t i = 1; i < net.layers.size(); ++i) {
    trace.pre.push_back(conv2d_forward(relu_forward(trace.pre.back()), net.layers[i], 1));
  }
  trace.output = trace.pre.back();
  for (std::size_t k = 0; k < trace.output.v.size(); ++k) trace.output.v[k] += x.v[k];
  return trace;
}

// Keeps existing buffers alive: callers hold spans into these vectors across
// repeated backward() calls, so they are only ever overwritten in place.
void NetworkGrads::init_like(const Network& net) {
  weights.resize(net.layers.size());
  biases.resize(net.layers.size());
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    weights[i].assign(net.layers[i].weights.size(), 0.0);
    biases[i].assign(net.layers[i].biases.size(), 0.0);
  }
}

Tensor backward(const Network& net, const ForwardTrace& trace, const Tensor& grad_output,
                NetworkGrads& grads) {
  if (!grad_output.same_shape(trace.output)) {
    throw ShapeError("backward: grad_output " + grad_output.shape_str() + " vs output " +
                     trace.output.shape_str());
  }
  grads.init_like(net);
  Tensor g = grad_output;  // gradient wrt pre[last]
  for (std::size_t i = net.layers.size(); i-- > 0;) {
    const Tensor input_i = i == 0 ? trace.input : relu_forward(trace.pre[i - 1]);
    ConvGrads cg = conv2d_backward(input_i, net.layers[i], g, 1);
    std::copy(cg.grad_weights.begin(), cg.grad_weights.end(), grads.weights[i].begin());
    std::copy(cg.grad_biases.begin(), cg.grad_biases.end(), grads.biases[i].begin());
    if (i == 0) {
      g = std::move(cg.grad_input);
    } else {
      g = relu_backward(trace.pre[i - 1], cg.grad_input);
    }
  }
  // residual skip: d(output)/d(input) has an identity component
  for (std::size_t k = 0; k < g.v.size(); ++k) g.v[k] += grad_output.v[k];
  return g;
}

std::vector<ParamView> param_views(Network& net, NetworkGrads& grads) {
  std::vector<ParamView> views;
  views.reserve(net.layers.size() * 2);
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    views.push_back({"layer" + std::to_string(i) + ".weights", net.layers[i].weights,
                     grads.weights[i]});
    views.push_back(
        {"layer" + std::to_string(i) + ".biases", net.layers[i].biases, grads.biases[i]});
  }
  return views;
}

std::int64_t count_params(const ModelSpec& spec) {
  spec.validate();
  const std::int64_t f = spec.width();
  const std::int64_t in = spec.in_channels;
  const std::int64_t d = spec.depth;
  return f * 9 * in + f + (d - 2) * (f * f * 9 + f) + in * 9 * f + in;
}

std::int64_t count_flops(const ModelSpec& spec, int h, int w) {
  spec.validate();
  if (h < 1 || w < 1) throw DomainError("count_flops: h and w must be >= 1");
  const std::int64_t f = spec.width();
  const std::int64_t in = spec.in_channels;
  const std::int64_t d = spec.depth;
  const std::int64_t macs_per_pixel = f * in * 9 + (d - 2) * f * f * 9 + in * f * 9;
  return 2 * static_cast<std::int64_t>(h) * w * macs_per_pixel;
}

void save_checkpoint(const Network& net, const std::filesystem::path& path,
                     const CheckpointMeta& meta, const OptimizerState* optimizer) {
  nlohmann::json j;
  j["spec"] = {{"depth", net.spec.depth},
               {"base_width", net.spec.base_width},
               {"ratio", net.spec.ratio},
               {"in_channels", net.spec.in_channels},
               {"seed", net.spec.seed}};
  j["meta"] = {{"scheme", meta.scheme},
               {"epoch", meta.epoch},
               {"seed", meta.seed},
               {"config_hash", meta.config_hash}};
  j["has_optimizer"] = optimizer != nullptr;
  if (optimizer != nullptr) {
    // infinity (clip disabled) is not representable in JSON; null stands in
    j["optimizer"] = {{"momentum", optimizer->momentum},
                      {"weight_decay", optimizer->weight_decay},
                      {"clip", std::isfinite(optimizer->clip) ? nlohmann::json(optimizer->clip)
                                                              : nlohmann::json(nullptr)},
                      {"lr", optimizer->lr}};
  }
  const std::string meta_json = j.dump();

  std::string out;
  out.append(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_u32(out, kCheckpointVersion);
  put_u64(out, meta_json.size());
  put_bytes(out, meta_json);
  for (const ConvParams& layer : net.layers) {
    put_f64_array(out, layer.weights);
    put_f64_array(out, layer.biases);
  }
  if (optimizer != nullptr) {
    for (const std::vector<double>& vel : optimizer->velocity) put_f64_array(out, vel);
  }
  put_u32(out, crc32_of(out));
  write_file(path, out);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  const std::string name = path.string();
  if (data.size() < sizeof(kCheckpointMagic) + 8) {
    throw CorruptFileError(name + ": too short for a checkpoint");
  }
  if (data.compare(0, sizeof(kCheckpointMagic), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
    throw CorruptFileError(name + ": bad magic, not a checkpoint file");
  }
  Cursor header(std::string_view(data).substr(sizeof(kCheckpointMagic)), name);
  const std::uint32_t version = header.u32();
  if (version != kCheckpointVersion) {
    throw VersionMismatchError(name + ": checkpoint format version " + std::to_string(version) +
                               " not supported (expected " + std::to_string(kCheckpointVersion) +
                               ")");
  }
  {
    Cursor tail(std::string_view(data).substr(data.size() - 4), name);
    const std::uint32_t expect = tail.u32();
    const std::uint32_t actual = crc32_of(std::string_view(data).substr(0, data.size() - 4));
    if (expect != actual) throw CorruptFileError(name + ": checksum mismatch");
  }

  Cursor cur(std::string_view(data).substr(sizeof(kCheckpointMagic), data.size() - 12), name);
  cur.u32();  // version, already validated
  const std::uint64_t meta_len = cur.u64();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(cur.bytes(meta_len));
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError(name + ": bad metadata: " + e.what());
  }

  LoadedCheckpoint ck;
  try {
    ModelSpec spec;
    spec.depth = j.at("spec").at("depth").get<int>();
    spec.base_width = j.at("spec").at("base_width").get<int>();
    spec.ratio = j.at("spec").at("ratio").get<double>();
    spec.in_channels = j.at("spec").at("in_channels").get<int>();
    spec.seed = j.at("spec").at("seed").get<std::uint64_t>();
    spec.validate();
    ck.net.spec = spec;
    ck.meta.scheme = j.at("meta").at("scheme").get<std::string>();
    ck.meta.epoch = j.at("meta").at("epoch").get<int>();
    ck.meta.seed = j.at("meta").at("seed").get<std::uint64_t>();
    ck.meta.config_hash = j.at("meta").at("config_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError(name + ": bad metadata: " + e.what());
  }

  const int f = ck.net.spec.width();
  for (int i = 0; i < ck.net.spec.depth; ++i) {
    const int ic = i == 0 ? ck.net.spec.in_channels : f;
    const int oc = i == ck.net.spec.depth - 1 ? ck.net.spec.in_channels : f;
    ConvParams layer(oc, ic, 3, 3);
    cur.f64_array(layer.weights);
    cur.f64_array(layer.biases);
    ck.net.layers.push_back(std::move(layer));
  }
  if (j.at("has_optimizer").get<bool>()) {
    OptimizerState opt;
    opt.momentum = j.at("optimizer").at("momentum").get<double>();
    opt.weight_decay = j.at("optimizer").at("weight_decay").get<double>();
    const nlohmann::json& clip = j.at("optimizer").at("clip");
    opt.clip = clip.is_null() ? std::numeric_limits<double>::infinity() : clip.get<double>();
    opt.lr = j.at("optimizer").at("lr").get<double>();
    for (const ConvParams& layer : ck.net.layers) {
      std::vector<double> vel(layer.weights.size());
      cur.f64_array(vel);
      opt.velocity.push_back(std::move(vel));
      std::vector<double> velb(layer.biases.size());
      cur.f64_array(velb);
      opt.velocity.push_back(std::move(velb));
    }
    ck.optimizer = std::move(opt);
  }
  cur.expect_end();
  return ck;
}

}  // namespace ailsr
