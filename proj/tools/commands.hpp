// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_TOOLS_COMMANDS_HPP
#define TAXOSEG_TOOLS_COMMANDS_HPP

#include <filesystem>
#include <string>

#include "config.hpp"

namespace taxoseg::cli {

// Exit codes shared by all subcommands: 0 full success, 1 configuration
// error (nothing written), 2 partial failure (per-file errors logged,
// remaining inputs processed).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitPartial = 2;

struct GlobalOptions {
    int jobs = 1;
    bool verbose = false;
};

int cmd_infer(const RunConfig& config, const GlobalOptions& options);
int cmd_evaluate(const RunConfig& config, const GlobalOptions& options);
int cmd_calibrate(const RunConfig& config, const GlobalOptions& options);

struct WeightsArgs {
    std::filesystem::path masks_dir;
    int classes = 0;
    double beta = 0.99;
    std::string normalize = "mean-one";  // or "none"
    std::filesystem::path out;           // optional; stdout always
};
int cmd_weights(const WeightsArgs& args);

struct SynthArgs {
    std::filesystem::path spec;
    std::filesystem::path out_dir;
};
int cmd_synth(const SynthArgs& args);

}  // namespace taxoseg::cli

#endif
