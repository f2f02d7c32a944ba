// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_TOOLS_CONFIG_HPP
#define TAXOSEG_TOOLS_CONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "taxoseg/tta.hpp"

namespace taxoseg::cli {

// Batch run description, loaded from a JSON config file. Relative paths in
// the file resolve against the file's own directory; the echo written next
// to artifacts keeps the paths exactly as the user wrote them.
struct RunConfig {
    std::filesystem::path config_dir;

    std::filesystem::path taxonomy;
    std::vector<std::string> prob_maps;    // globs, infer/calibrate inputs
    std::vector<std::string> masks;        // globs, ground-truth masks
    std::vector<std::string> predictions;  // globs, evaluate inputs

    std::optional<double> target_gsd;
    std::optional<double> source_gsd_default;
    std::map<std::string, double> source_gsd_per_input;  // stem -> mm/px

    std::optional<int> tile_size;
    int overlap = 0;

    std::optional<std::filesystem::path> thresholds;
    std::vector<TtaTransform> tta;

    bool include_unknown = false;
    std::set<std::string> exclude;

    std::string objective = "f1";  // calibrate
    double step = 0.01;

    std::filesystem::path out;

    std::string echo_json;  // normalized copy of the file content plus defaults
};

RunConfig load_run_config(const std::filesystem::path& path);

// Expands one glob (wildcards in the filename part only: * ? [...]) against
// `base` for relative patterns. Results are sorted for determinism.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern,
                                               const std::filesystem::path& base);

// Filename without extension; a trailing ".pred" artifact suffix is
// stripped so prediction artifacts pair with their source stems.
std::string input_stem(const std::filesystem::path& path);

}  // namespace taxoseg::cli

#endif
