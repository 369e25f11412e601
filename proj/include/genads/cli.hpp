//==============================================================================
// cli.hpp
// Operator surface. Subcommands: verify (physics self-checks), train,
// generate, eval. Flags: --config PATH, --seed N (overrides the config),
// --out DIR, --checkpoint PATH; everything else lives in the config file.
// Exit codes: 0 success, 1 runtime/verification failure, 2 configuration or
// format errors.
//==============================================================================
#pragma once

#include <iosfwd>
#include <string>

#include "genads/config.hpp"

namespace genads {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::string checkpoint_path;
  bool seed_override = false;
  std::uint64_t seed = 0;
};

// Return values are process exit codes.
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_train(const RunConfig& cfg, const CliOptions& opts, std::ostream& out);
int cmd_generate(const RunConfig& cfg, const CliOptions& opts,
                 std::ostream& out);
int cmd_eval(const RunConfig& cfg, const CliOptions& opts, std::ostream& out);

int cli_main(int argc, char** argv);

}  // namespace genads
