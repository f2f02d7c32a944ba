// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <json.hpp>

#include "taxoseg/error.hpp"
#include "taxoseg/fsio.hpp"

namespace taxoseg::cli {
namespace {

using nlohmann::json;

std::vector<std::string> string_or_list(const json& value) {
    if (value.is_string()) return {value.get<std::string>()};
    return value.get<std::vector<std::string>>();
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error("config " + path.string() + " is not valid JSON: " + e.what());
    }

    RunConfig cfg;
    cfg.config_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    try {
        if (!doc.contains("taxonomy")) throw Error("config: missing required key 'taxonomy'");
        cfg.taxonomy = doc.at("taxonomy").get<std::string>();
        if (doc.contains("prob_maps")) cfg.prob_maps = string_or_list(doc.at("prob_maps"));
        if (doc.contains("masks")) cfg.masks = string_or_list(doc.at("masks"));
        if (doc.contains("predictions")) cfg.predictions = string_or_list(doc.at("predictions"));
        if (doc.contains("target_gsd")) cfg.target_gsd = doc.at("target_gsd").get<double>();
        if (doc.contains("source_gsd")) {
            const auto& sg = doc.at("source_gsd");
            if (sg.is_number()) {
                cfg.source_gsd_default = sg.get<double>();
            } else {
                if (sg.contains("default")) cfg.source_gsd_default = sg.at("default").get<double>();
                if (sg.contains("per_input"))
                    cfg.source_gsd_per_input =
                        sg.at("per_input").get<std::map<std::string, double>>();
            }
        }
        if (doc.contains("tile_size")) cfg.tile_size = doc.at("tile_size").get<int>();
        if (doc.contains("overlap")) cfg.overlap = doc.at("overlap").get<int>();
        if (doc.contains("thresholds"))
            cfg.thresholds = std::filesystem::path(doc.at("thresholds").get<std::string>());
        if (doc.contains("tta")) {
            for (const auto& name : doc.at("tta").get<std::vector<std::string>>()) {
                auto t = tta_transform_from_string(name);
                if (!t) throw Error("config: unknown tta transform '" + name + "'");
                cfg.tta.push_back(*t);
            }
        }
        if (doc.contains("include_unknown")) cfg.include_unknown = doc.at("include_unknown").get<bool>();
        if (doc.contains("exclude")) {
            auto list = doc.at("exclude").get<std::vector<std::string>>();
            cfg.exclude = std::set<std::string>(list.begin(), list.end());
        }
        if (doc.contains("objective")) cfg.objective = doc.at("objective").get<std::string>();
        if (doc.contains("step")) cfg.step = doc.at("step").get<double>();
        if (!doc.contains("out")) throw Error("config: missing required key 'out'");
        cfg.out = doc.at("out").get<std::string>();
    } catch (const json::exception& e) {
        throw Error("config " + path.string() + ": " + e.what());
    }

    if (cfg.objective != "f1" && cfg.objective != "dice")
        throw Error("config: objective must be 'f1' or 'dice'");

    // Echo keeps user-written values; only the defaults are materialized.
    json echo = doc;
    echo["objective"] = cfg.objective;
    echo["step"] = cfg.step;
    echo["include_unknown"] = cfg.include_unknown;
    echo["overlap"] = cfg.overlap;
    cfg.echo_json = echo.dump(2);
    return cfg;
}

std::vector<std::filesystem::path> expand_glob(const std::string& pattern,
                                               const std::filesystem::path& base) {
    namespace fs = std::filesystem;
    fs::path p(pattern);
    fs::path resolved = p.is_absolute() ? p : base / p;
    const std::string name = resolved.filename().string();

    std::vector<fs::path> out;
    if (name.find_first_of("*?[") == std::string::npos) {
        if (fs::exists(resolved)) out.push_back(resolved);
        return out;
    }
    const fs::path dir = resolved.parent_path().empty() ? fs::path(".") : resolved.parent_path();
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string candidate = entry.path().filename().string();
        if (fnmatch(name.c_str(), candidate.c_str(), 0) == 0) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string input_stem(const std::filesystem::path& path) {
    std::string stem = path.stem().string();
    const std::string pred_suffix = ".pred";
    if (stem.size() > pred_suffix.size() &&
        stem.compare(stem.size() - pred_suffix.size(), pred_suffix.size(), pred_suffix) == 0)
        stem.resize(stem.size() - pred_suffix.size());
    return stem;
}

}  // namespace taxoseg::cli
