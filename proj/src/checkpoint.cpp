#include "genads/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace genads {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'G', 'A', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::ifstream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw LoadError(path + ": truncated header");
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) |
         (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
}

std::uint64_t get_u64(std::ifstream& in, const std::string& path) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8))
    throw LoadError(path + ": truncated header");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

json arch_to_json(const ArchSpec& a) {
  return json{{"width", a.width},
              {"blocks", a.blocks},
              {"kernel", a.kernel},
              {"out_channels", a.out_channels},
              {"time_fourier", a.time_fourier}};
}

ArchSpec arch_from_json(const json& j) {
  ArchSpec a;
  a.width = j.at("width").get<int>();
  a.blocks = j.at("blocks").get<int>();
  a.kernel = j.at("kernel").get<int>();
  a.out_channels = j.at("out_channels").get<int>();
  a.time_fourier = j.at("time_fourier").get<int>();
  a.validate();
  return a;
}

json background_to_json(const Background& bg) {
  return json{{"kind", bg.kind == GeometryKind::PlanarAdS ? "planar" : "hsv"},
              {"d", bg.d},
              {"delta", bg.delta},
              {"p", bg.p},
              {"r_ir", bg.r_ir},
              {"r_uv", bg.r_uv}};
}

Background background_from_json(const json& j) {
  Background bg;
  bg.kind = j.at("kind").get<std::string>() == "hsv" ? GeometryKind::Hsv
                                                     : GeometryKind::PlanarAdS;
  bg.d = j.at("d").get<int>();
  bg.delta = j.at("delta").get<double>();
  bg.p = j.at("p").get<double>();
  bg.r_ir = j.at("r_ir").get<double>();
  bg.r_uv = j.at("r_uv").get<double>();
  return bg;
}

}  // namespace

const char* train_mode_name(TrainMode mode) {
  switch (mode) {
    case TrainMode::FullLinear: return "full_linear";
    case TrainMode::ResidualLinear: return "residual_linear";
    case TrainMode::ResidualHermite: return "residual_hermite";
  }
  return "full_linear";
}

TrainMode train_mode_from_name(const std::string& name) {
  if (name == "full_linear") return TrainMode::FullLinear;
  if (name == "residual_linear") return TrainMode::ResidualLinear;
  if (name == "residual_hermite") return TrainMode::ResidualHermite;
  throw std::invalid_argument("unknown train mode '" + name + "'");
}

void save_checkpoint(const std::string& path, const TrainerState& state,
                     const CheckpointMeta& meta) {
  json tensors = json::array();
  auto add_group = [&](const std::string& prefix) {
    for (const auto& d : state.params.descs)
      tensors.push_back(
          {{"name", prefix + "/" + d.name}, {"shape", d.shape}, {"dtype", "f32"}});
  };
  add_group("params");
  add_group("adam_m");
  add_group("adam_v");

  json header{{"arch", arch_to_json(state.params.spec)},
              {"mode", train_mode_name(meta.mode)},
              {"grid", {{"k", meta.grid_k}, {"l", meta.grid_l}}},
              {"background", background_to_json(meta.background)},
              {"step", state.step},
              {"epoch", state.epoch},
              {"rng", {{"seed", state.seed}, {"next_sample", state.next_sample}}},
              {"config_echo", state.config_echo},
              {"tensors", tensors}};
  const std::string htext = header.dump();

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + tmp);
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u64(out, htext.size());
    out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
    auto write_floats = [&](const std::vector<float>& v) {
      out.write(reinterpret_cast<const char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(float)));
    };
    write_floats(state.params.data);
    write_floats(state.adam_m);
    write_floats(state.adam_v);
    if (!out) throw std::runtime_error("save_checkpoint: write failed on " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path + ": cannot open");
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw LoadError(path + ": bad magic, not a checkpoint file");
  const std::uint32_t version = get_u32(in, path);
  if (version != kVersion)
    throw LoadError(path + ": unsupported version " + std::to_string(version));
  const std::uint64_t hlen = get_u64(in, path);
  std::string htext(hlen, '\0');
  if (!in.read(htext.data(), static_cast<std::streamsize>(hlen)))
    throw LoadError(path + ": truncated header");
  json header;
  try {
    header = json::parse(htext);
  } catch (const std::exception& e) {
    throw LoadError(path + ": malformed header JSON: " + e.what());
  }

  LoadedCheckpoint out;
  const ArchSpec arch = arch_from_json(header.at("arch"));
  out.state.params = build_params<float>(arch);
  out.state.adam_m.assign(out.state.params.data.size(), 0.0f);
  out.state.adam_v.assign(out.state.params.data.size(), 0.0f);
  out.state.step = header.at("step").get<long>();
  out.state.epoch = header.at("epoch").get<int>();
  out.state.seed = header.at("rng").at("seed").get<std::uint64_t>();
  out.state.next_sample = header.at("rng").at("next_sample").get<std::uint64_t>();
  out.state.config_echo = header.value("config_echo", std::string());
  out.meta.mode = train_mode_from_name(header.at("mode").get<std::string>());
  out.meta.grid_k = header.at("grid").at("k").get<int>();
  out.meta.grid_l = header.at("grid").at("l").get<double>();
  out.meta.background = background_from_json(header.at("background"));

  // Validate the tensor manifest against the architecture.
  const auto& tensors = header.at("tensors");
  const size_t per_group = out.state.params.descs.size();
  if (tensors.size() != 3 * per_group)
    throw LoadError(path + ": tensor manifest size mismatch");
  const char* prefixes[3] = {"params", "adam_m", "adam_v"};
  for (size_t g = 0; g < 3; ++g)
    for (size_t i = 0; i < per_group; ++i) {
      const auto& t = tensors[g * per_group + i];
      const auto& d = out.state.params.descs[i];
      const std::string want = std::string(prefixes[g]) + "/" + d.name;
      if (t.at("name").get<std::string>() != want)
        throw LoadError(path + ": unexpected tensor '" +
                        t.at("name").get<std::string>() + "', expected '" +
                        want + "'");
      if (t.at("shape").get<std::vector<int>>() != d.shape)
        throw LoadError(path + ": shape mismatch for tensor '" + want + "'");
      if (t.at("dtype").get<std::string>() != "f32")
        throw LoadError(path + ": unsupported dtype for tensor '" + want + "'");
    }

  auto read_floats = [&](std::vector<float>& v, const char* what) {
    if (!in.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(float))))
      throw LoadError(path + ": truncated payload reading " + what);
  };
  read_floats(out.state.params.data, "params");
  read_floats(out.state.adam_m, "adam_m");
  read_floats(out.state.adam_v, "adam_v");
  return out;
}

}  // namespace genads
