#include "genads/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "genads/checkpoint.hpp"
#include "genads/sampler.hpp"

namespace genads {

namespace {

struct RawConfig {
  // section -> key -> (value, consumed)
  std::map<std::string, std::map<std::string, std::pair<std::string, bool>>> data;
  std::string origin;

  bool has(const std::string& sec, const std::string& key) {
    auto s = data.find(sec);
    if (s == data.end()) return false;
    return s->second.find(key) != s->second.end();
  }
  std::string take(const std::string& sec, const std::string& key) {
    auto& entry = data[sec][key];
    entry.second = true;
    return entry.first;
  }
};

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

RawConfig lex_config(const std::string& text, const std::string& origin) {
  RawConfig raw;
  raw.origin = origin;
  std::stringstream ss(text);
  std::string line, section;
  size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": key outside any [section]");
    if (raw.data[section].count(key))
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": duplicate key '" + section + "." + key + "'");
    raw.data[section][key] = {value, false};
  }
  return raw;
}

double to_double(const std::string& v, const std::string& what) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + what + "' is not a number: '" + v + "'");
  }
}

int to_int(const std::string& v, const std::string& what) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(x);
  } catch (const std::exception&) {
    throw ConfigError("config: '" + what + "' is not an integer: '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& v, const std::string& what) {
  try {
    size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw ConfigError("config: '" + what + "' is not a non-negative integer: '" +
                      v + "'");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin) {
  RawConfig raw = lex_config(text, origin);
  RunConfig cfg;
  TrainConfig& t = cfg.train;

  auto num = [&](const char* sec, const char* key, double dflt) {
    return raw.has(sec, key) ? to_double(raw.take(sec, key),
                                         std::string(sec) + "." + key)
                             : dflt;
  };
  auto integer = [&](const char* sec, const char* key, int dflt) {
    return raw.has(sec, key) ? to_int(raw.take(sec, key),
                                      std::string(sec) + "." + key)
                             : dflt;
  };
  auto str = [&](const char* sec, const char* key, const std::string& dflt) {
    return raw.has(sec, key) ? raw.take(sec, key) : dflt;
  };

  // [train]
  t.mode = train_mode_from_name(str("train", "mode", "full_linear"));
  t.epochs = integer("train", "epochs", 100);
  t.batch_size = integer("train", "batch_size", 64);
  t.samples_per_epoch = integer("train", "samples_per_epoch", 50000);
  t.learning_rate = num("train", "learning_rate", 3e-4);
  t.weight_decay = num("train", "weight_decay", 1e-5);
  t.adam_beta1 = num("train", "adam_beta1", 0.9);
  t.adam_beta2 = num("train", "adam_beta2", 0.999);
  t.adam_eps = num("train", "adam_eps", 1e-8);
  if (raw.has("train", "seed")) t.seed = to_u64(raw.take("train", "seed"), "train.seed");
  const std::string ts = str("train", "t_sampling", "per_element");
  if (ts == "per_element") t.t_sampling = TSampling::PerElement;
  else if (ts == "per_batch") t.t_sampling = TSampling::PerBatch;
  else throw ConfigError("config: train.t_sampling must be per_element or per_batch");
  t.eval_every = integer("train", "eval_every", 10);
  t.eval_samples = integer("train", "eval_samples", 400);
  t.eval_integration_steps = integer("train", "eval_integration_steps", 16);
  t.checkpoint_every = integer("train", "checkpoint_every", 0);
  t.threads = integer("train", "threads", 1);

  // [background]
  const std::string kind = str("background", "kind", "planar");
  const int d = integer("background", "d", 2);
  if (kind == "planar") {
    for (const char* banned : {"p", "z_ir", "z_uv"})
      if (raw.has("background", banned))
        throw ConfigError(std::string("config: background.") + banned +
                          " only applies to kind = hsv");
    t.background = Background::planar_ads(
        d, num("background", "delta", 1.5), num("background", "r_ir", 0.0),
        num("background", "r_uv", 1.0));
  } else if (kind == "hsv") {
    // Only the massless HSV scalar has closed-form propagators.
    for (const char* banned : {"delta", "mass", "m2", "r_ir", "r_uv"}) {
      if (!raw.has("background", banned)) continue;
      if (std::string(banned) == "delta" || std::string(banned) == "mass" ||
          std::string(banned) == "m2")
        throw ConfigError(
            "config: HSV backgrounds are massless only; the massive mode "
            "equation has no closed-form propagator (remove background." +
            std::string(banned) + ")");
      throw ConfigError("config: HSV cutoffs are given in z coordinates "
                        "(background.z_ir / background.z_uv), not r");
    }
    t.background =
        Background::hsv(d, num("background", "p", 1.0),
                        num("background", "z_ir", 1.0),
                        num("background", "z_uv", 0.36787944117144233));
  } else {
    throw ConfigError("config: background.kind must be planar or hsv");
  }

  // [grid]
  t.grid_k = integer("grid", "k", 16);
  t.grid_l = num("grid", "l", 8.0);

  // [base]
  t.base.c_phi = num("base", "c_phi", 1.0);
  t.base.c_pi = num("base", "c_pi", 0.55);
  t.base.s_phi = num("base", "s_phi", 1.0);
  t.base.s_pi = num("base", "s_pi", 1.0);

  // [model]
  t.arch.width = integer("model", "width", 72);
  t.arch.blocks = integer("model", "blocks", 2);
  t.arch.kernel = integer("model", "kernel", 3);
  t.arch.time_fourier = integer("model", "time_fourier", 4);
  t.arch.out_channels = model_out_channels(t.mode);

  // [dataset]
  const std::string dkind = str("dataset", "kind", "checkerboard");
  if (dkind == "checkerboard") {
    t.dataset.kind = DatasetKind::Checkerboard;
    t.dataset.checkerboard.half_width = num("dataset", "half_width", 4.0);
    t.dataset.checkerboard.cell = num("dataset", "cell", 2.0);
  } else if (dkind == "idx_images") {
    t.dataset.kind = DatasetKind::IdxImages;
    t.dataset.idx_path = str("dataset", "path", "");
    if (t.dataset.idx_path.empty())
      throw ConfigError("config: dataset.path required for idx_images");
  } else {
    throw ConfigError("config: dataset.kind must be checkerboard or idx_images");
  }
  t.dataset.max_items = integer("dataset", "max_items", 10000);

  // [sampler]
  const std::string integ = str("sampler", "integrator", "rk4");
  if (integ == "rk4") t.sampler.integrator = Integrator::RK4;
  else if (integ == "euler") t.sampler.integrator = Integrator::Euler;
  else throw ConfigError("config: sampler.integrator must be rk4 or euler");
  t.sampler.n_steps = integer("sampler", "n_steps", 100);
  const std::string est = str("sampler", "estimator", "centroid");
  if (est == "centroid") t.sampler.estimator = PointEstimator::Centroid;
  else if (est == "circular") t.sampler.estimator = PointEstimator::Circular;
  else throw ConfigError("config: sampler.estimator must be centroid or circular");
  cfg.n_samples = integer("sampler", "n_samples", 10000);

  // [eval]
  cfg.eval.kind = str("eval", "kind", "points");
  if (cfg.eval.kind != "points" && cfg.eval.kind != "images" &&
      cfg.eval.kind != "features")
    throw ConfigError("config: eval.kind must be points, images or features");
  cfg.eval.generated = str("eval", "generated", "");
  cfg.eval.reference = str("eval", "reference", "checkerboard");
  cfg.eval.n_reference = integer("eval", "n_reference", 10000);

  // Reject anything left over.
  for (const auto& [sec, keys] : raw.data)
    for (const auto& [key, entry] : keys)
      if (!entry.second)
        throw ConfigError("config: unknown key '" + sec + "." + key + "'");

  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
  const TrainConfig& t = cfg.train;
  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "[train]\n";
  out << "mode = " << train_mode_name(t.mode) << '\n';
  out << "epochs = " << t.epochs << '\n';
  out << "batch_size = " << t.batch_size << '\n';
  out << "samples_per_epoch = " << t.samples_per_epoch << '\n';
  out << "learning_rate = " << fmt(t.learning_rate) << '\n';
  out << "weight_decay = " << fmt(t.weight_decay) << '\n';
  out << "adam_beta1 = " << fmt(t.adam_beta1) << '\n';
  out << "adam_beta2 = " << fmt(t.adam_beta2) << '\n';
  out << "adam_eps = " << fmt(t.adam_eps) << '\n';
  out << "seed = " << t.seed << '\n';
  out << "t_sampling = "
      << (t.t_sampling == TSampling::PerElement ? "per_element" : "per_batch")
      << '\n';
  out << "eval_every = " << t.eval_every << '\n';
  out << "eval_samples = " << t.eval_samples << '\n';
  out << "eval_integration_steps = " << t.eval_integration_steps << '\n';
  out << "checkpoint_every = " << t.checkpoint_every << '\n';
  out << "threads = " << t.threads << '\n';
  out << "\n[background]\n";
  if (t.background.kind == GeometryKind::PlanarAdS) {
    out << "kind = planar\n";
    out << "d = " << t.background.d << '\n';
    out << "delta = " << fmt(t.background.delta) << '\n';
    out << "r_ir = " << fmt(t.background.r_ir) << '\n';
    out << "r_uv = " << fmt(t.background.r_uv) << '\n';
  } else {
    out << "kind = hsv\n";
    out << "d = " << t.background.d << '\n';
    out << "p = " << fmt(t.background.p) << '\n';
    // stored r cutoffs map back to z = (p r)^(1/p)
    out << "z_ir = " << fmt(std::pow(t.background.p * t.background.r_ir,
                                     1.0 / t.background.p)) << '\n';
    out << "z_uv = " << fmt(std::pow(t.background.p * t.background.r_uv,
                                     1.0 / t.background.p)) << '\n';
  }
  out << "\n[grid]\n";
  out << "k = " << t.grid_k << '\n';
  out << "l = " << fmt(t.grid_l) << '\n';
  out << "\n[base]\n";
  out << "c_phi = " << fmt(t.base.c_phi) << '\n';
  out << "c_pi = " << fmt(t.base.c_pi) << '\n';
  out << "s_phi = " << fmt(t.base.s_phi) << '\n';
  out << "s_pi = " << fmt(t.base.s_pi) << '\n';
  out << "\n[model]\n";
  out << "width = " << t.arch.width << '\n';
  out << "blocks = " << t.arch.blocks << '\n';
  out << "kernel = " << t.arch.kernel << '\n';
  out << "time_fourier = " << t.arch.time_fourier << '\n';
  out << "\n[dataset]\n";
  if (t.dataset.kind == DatasetKind::Checkerboard) {
    out << "kind = checkerboard\n";
    out << "half_width = " << fmt(t.dataset.checkerboard.half_width) << '\n';
    out << "cell = " << fmt(t.dataset.checkerboard.cell) << '\n';
  } else {
    out << "kind = idx_images\n";
    out << "path = " << t.dataset.idx_path << '\n';
  }
  out << "max_items = " << t.dataset.max_items << '\n';
  out << "\n[sampler]\n";
  out << "integrator = "
      << (t.sampler.integrator == Integrator::RK4 ? "rk4" : "euler") << '\n';
  out << "n_steps = " << t.sampler.n_steps << '\n';
  out << "estimator = "
      << (t.sampler.estimator == PointEstimator::Centroid ? "centroid"
                                                          : "circular")
      << '\n';
  out << "n_samples = " << cfg.n_samples << '\n';
  out << "\n[eval]\n";
  out << "kind = " << cfg.eval.kind << '\n';
  out << "generated = " << cfg.eval.generated << '\n';
  out << "reference = " << cfg.eval.reference << '\n';
  out << "n_reference = " << cfg.eval.n_reference << '\n';
  return out.str();
}

}  // namespace genads
