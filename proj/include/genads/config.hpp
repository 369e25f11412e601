//==============================================================================
// config.hpp
// Plain-text run configuration: flat `key = value` pairs inside [sections],
// '#' or ';' comments. Unknown sections or keys are rejected. Defaults match
// the reference experiment values where those are fixed (learning rate 3e-4,
// weight decay 1e-5, batch 64, K = 16, L = 8, Delta = 1.5, r_ir = 0,
// r_uv = 1, base c_phi = 1.0, c_pi = 0.55, s_phi = s_pi = 1.0). The canonical
// serialization (config echo) lists every key explicitly so runs are
// self-describing.
//==============================================================================
#pragma once

#include <stdexcept>
#include <string>

#include "genads/trainer.hpp"

namespace genads {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalConfig {
  std::string kind = "points";  // points | images | features
  std::string generated;        // points/features: csv; images: idx or pgm dir
  std::string reference;        // path, or "checkerboard" for points
  int n_reference = 10000;      // reference draw count for "checkerboard"
};

struct RunConfig {
  TrainConfig train;       // includes background, grid, base, model, dataset
  int n_samples = 10000;   // generate: number of decoded samples
  EvalConfig eval;
};

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<config>");
RunConfig parse_config_file(const std::string& path);

// Canonical echo of the parsed configuration.
std::string serialize_config(const RunConfig& cfg);

}  // namespace genads
