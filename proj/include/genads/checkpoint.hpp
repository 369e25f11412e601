//==============================================================================
// checkpoint.hpp
// Checkpoint container: magic "GADS", u32 little-endian version, u64 header
// length, UTF-8 JSON header naming the tensors in payload order, then raw
// float32 little-endian payloads (parameters, AdamW first moments, AdamW
// second moments). The header also carries the architecture descriptor, the
// training-arm/grid/background metadata, step counters, the RNG state
// (master seed + next sample counter) and a config echo. Files are written to
// a temp name and renamed so partial writes never corrupt an existing one.
//==============================================================================
#pragma once

#include <string>

#include "genads/trainer.hpp"

namespace genads {

struct CheckpointMeta {
  TrainMode mode = TrainMode::FullLinear;
  int grid_k = 16;
  double grid_l = 8.0;
  Background background = Background::planar_ads(2, 1.5, 0.0, 1.0);
};

struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void save_checkpoint(const std::string& path, const TrainerState& state,
                     const CheckpointMeta& meta);

struct LoadedCheckpoint {
  TrainerState state;
  CheckpointMeta meta;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

const char* train_mode_name(TrainMode mode);
TrainMode train_mode_from_name(const std::string& name);

}  // namespace genads
