// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <atomic>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "taxoseg/balance.hpp"
#include "taxoseg/fsio.hpp"
#include "taxoseg/hash.hpp"
#include "taxoseg/hierinfer.hpp"
#include "taxoseg/metrics.hpp"
#include "taxoseg/npy_io.hpp"
#include "taxoseg/png_io.hpp"
#include "taxoseg/report.hpp"
#include "taxoseg/rescale.hpp"
#include "taxoseg/synthfield.hpp"
#include "taxoseg/tiling.hpp"

namespace taxoseg::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct FileError {
    std::string file;
    std::string message;
};

std::mutex log_mutex;

// Bounded worker pool over an index range; per-item failures are collected,
// not fatal. Outputs are written atomically by the workers themselves, so
// completion order does not affect the artifacts.
template <typename Fn>
std::vector<FileError> for_each_input(size_t count, int jobs, Fn&& fn) {
    std::vector<std::optional<FileError>> slots(count);
    if (jobs <= 1) {
        for (size_t i = 0; i < count; ++i) slots[i] = fn(i);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) slots[i] = fn(i);
        };
        std::vector<std::thread> pool;
        const int n = std::min<int>(jobs, static_cast<int>(count));
        pool.reserve(n);
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::vector<FileError> errors;
    for (auto& slot : slots)
        if (slot) errors.push_back(std::move(*slot));
    return errors;
}

TaxonomyTree load_taxonomy_checked(const RunConfig& config, std::string& file_hash) {
    const fs::path path =
        config.taxonomy.is_absolute() ? config.taxonomy : config.config_dir / config.taxonomy;
    const std::string bytes = read_file(path);
    file_hash = content_hash_hex(bytes);
    return parse_taxonomy(bytes);
}

void write_run_echo(const RunConfig& config, const std::string& taxonomy_hash, const char* command) {
    json echo = json::parse(config.echo_json);
    echo["command"] = command;
    echo["taxonomy_hash"] = taxonomy_hash;
    write_file_atomic(config.out / "run_config.json", echo.dump(2) + "\n");
}

void write_error_log(const fs::path& out_dir, const std::vector<FileError>& errors) {
    if (errors.empty()) return;
    std::string log;
    for (const auto& e : errors) log += e.file + ": " + e.message + "\n";
    write_file_atomic(out_dir / "errors.log", log);
    for (const auto& e : errors) std::cerr << "error: " << e.file << ": " << e.message << "\n";
}

std::map<std::string, double> load_thresholds_file(const fs::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error("thresholds " + path.string() + " is not valid JSON: " + e.what());
    }
    const json& table = doc.contains("thresholds") ? doc.at("thresholds") : doc;
    std::map<std::string, double> out;
    for (auto it = table.begin(); it != table.end(); ++it) out[it.key()] = it.value().get<double>();
    return out;
}

bool has_tta_suffix(const std::string& stem) {
    for (TtaTransform t : {TtaTransform::hflip, TtaTransform::vflip, TtaTransform::rot90,
                           TtaTransform::rot180, TtaTransform::rot270}) {
        const std::string suffix = std::string(".") + to_string(t);
        if (stem.size() > suffix.size() &&
            stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0)
            return true;
    }
    return false;
}

// Sidecar describing the prediction artifacts of one image.
std::string prediction_sidecar(const PredictionMap& pred, const std::string& stem,
                               const std::string& taxonomy_hash) {
    json doc;
    doc["stem"] = stem;
    doc["height"] = pred.height;
    doc["width"] = pred.width;
    doc["ranks"] = pred.ranks;
    json tables;
    for (size_t r = 0; r < pred.ranks.size(); ++r) tables[pred.ranks[r]] = pred.rank_tables[r];
    doc["node_tables"] = std::move(tables);
    json files;
    files["chosen_leaf"] = stem + ".pred.png";
    json conf;
    for (const auto& rank : pred.ranks) conf[rank] = stem + ".conf_" + rank + ".npy";
    files["confidence"] = std::move(conf);
    doc["files"] = std::move(files);
    doc["taxonomy_hash"] = taxonomy_hash;
    return doc.dump(2) + "\n";
}

struct PairedInputs {
    std::vector<fs::path> left;   // e.g. predictions or prob maps
    std::vector<fs::path> right;  // ground-truth masks
    std::vector<std::string> stems;
    std::vector<FileError> errors;
};

PairedInputs pair_by_stem(const std::vector<fs::path>& lhs, const std::vector<fs::path>& rhs,
                          const char* lhs_what, const char* rhs_what) {
    PairedInputs out;
    std::map<std::string, fs::path> right_by_stem;
    for (const auto& p : rhs) right_by_stem[input_stem(p)] = p;
    std::map<std::string, fs::path> left_by_stem;
    for (const auto& p : lhs) left_by_stem[input_stem(p)] = p;

    for (const auto& [stem, path] : left_by_stem) {
        auto it = right_by_stem.find(stem);
        if (it == right_by_stem.end()) {
            out.errors.push_back({path.string(), std::string("no paired ") + rhs_what + " for stem '" + stem + "'"});
            continue;
        }
        out.left.push_back(path);
        out.right.push_back(it->second);
        out.stems.push_back(stem);
    }
    for (const auto& [stem, path] : right_by_stem)
        if (!left_by_stem.count(stem))
            out.errors.push_back({path.string(), std::string("no paired ") + lhs_what + " for stem '" + stem + "'"});
    return out;
}

std::vector<fs::path> expand_globs(const std::vector<std::string>& patterns, const fs::path& base) {
    std::vector<fs::path> out;
    for (const auto& pattern : patterns) {
        auto matches = expand_glob(pattern, base);
        out.insert(out.end(), matches.begin(), matches.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

int cmd_infer(const RunConfig& config, const GlobalOptions& options) {
    std::string taxonomy_hash;
    TaxonomyTree tree = load_taxonomy_checked(config, taxonomy_hash);

    std::map<std::string, double> thresholds;
    if (config.thresholds) {
        const fs::path path = config.thresholds->is_absolute() ? *config.thresholds
                                                               : config.config_dir / *config.thresholds;
        thresholds = load_thresholds_file(path);
    }

    std::vector<fs::path> inputs = expand_globs(config.prob_maps, config.config_dir);
    if (!config.tta.empty()) {
        // View files are inputs to fusion, not standalone images.
        std::erase_if(inputs, [](const fs::path& p) { return has_tta_suffix(p.stem().string()); });
    }
    if (inputs.empty()) throw Error("infer: no probability maps matched 'prob_maps'");

    fs::create_directories(config.out);
    write_run_echo(config, taxonomy_hash, "infer");

    auto process = [&](size_t i) -> std::optional<FileError> {
        const fs::path& file = inputs[i];
        try {
            const std::string stem = input_stem(file);

            ProbMap map;
            if (config.tta.empty()) {
                map = load_prob_map(read_file(file));
            } else {
                std::vector<TtaView> views;
                for (TtaTransform t : config.tta) {
                    fs::path view_path = file;
                    if (t != TtaTransform::identity)
                        view_path = file.parent_path() / (stem + "." + to_string(t) + ".npy");
                    views.push_back({load_prob_map(read_file(view_path)), t});
                }
                map = fuse_tta(views).fused;
            }

            if (map.channels != tree.channel_count())
                throw Error("map has " + std::to_string(map.channels) + " channels, taxonomy binds " +
                            std::to_string(tree.channel_count()));
            if (auto problem = map.check_distribution(); !problem.empty())
                throw Error("not a probability map: " + problem);

            double source_gsd = config.source_gsd_default.value_or(0.0);
            if (auto it = config.source_gsd_per_input.find(stem); it != config.source_gsd_per_input.end())
                source_gsd = it->second;
            if (source_gsd > 0.0) {
                GsdSpec spec{source_gsd, config.target_gsd.value_or(GsdSpec::kDefaultTargetGsd)};
                map = rescale_prob_map(map, spec);
            }

            if (config.tile_size) {
                TilePlan plan = plan_tiles(map.height, map.width, *config.tile_size, config.overlap);
                std::vector<std::pair<TileOrigin, ProbMap>> tiles;
                tiles.reserve(plan.origins.size());
                for (TileOrigin origin : plan.origins)
                    tiles.emplace_back(origin, extract_tile(map, origin, plan.tile_size));
                map = stitch_maps(tiles, map.height, map.width);
            }

            PredictionMap pred = hierarchical_argmax(aggregate_to_nodes(map, tree), tree);
            if (!thresholds.empty()) pred = apply_confidence_thresholds(pred, thresholds, tree);

            write_file_atomic(config.out / (stem + ".pred.png"), store_label_mask(to_label_mask(pred)));
            for (size_t r = 0; r < pred.ranks.size(); ++r) {
                FloatGrid grid{pred.height, pred.width, 0.0f};
                grid.data = pred.rank_confidence[r];
                write_file_atomic(config.out / (stem + ".conf_" + pred.ranks[r] + ".npy"),
                                  store_float_grid(grid));
            }
            write_file_atomic(config.out / (stem + ".pred.json"),
                              prediction_sidecar(pred, stem, taxonomy_hash));
            if (options.verbose) {
                std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << "infer: " << file.string() << " done\n";
            }
            return std::nullopt;
        } catch (const std::exception& e) {
            return FileError{file.string(), e.what()};
        }
    };

    auto errors = for_each_input(inputs.size(), options.jobs, process);
    write_error_log(config.out, errors);
    return errors.empty() ? kExitOk : kExitPartial;
}

int cmd_evaluate(const RunConfig& config, const GlobalOptions& options) {
    std::string taxonomy_hash;
    TaxonomyTree tree = load_taxonomy_checked(config, taxonomy_hash);

    auto preds = expand_globs(config.predictions, config.config_dir);
    auto gts = expand_globs(config.masks, config.config_dir);
    if (preds.empty()) throw Error("evaluate: no predictions matched 'predictions'");
    if (gts.empty()) throw Error("evaluate: no masks matched 'masks'");

    fs::create_directories(config.out);
    write_run_echo(config, taxonomy_hash, "evaluate");

    PairedInputs paired = pair_by_stem(preds, gts, "prediction", "mask");
    std::vector<FileError> errors = std::move(paired.errors);

    struct LoadedPair {
        LabelMask pred, gt;
        std::string stem;
    };
    std::vector<std::optional<LoadedPair>> loaded(paired.stems.size());
    auto load_errors = for_each_input(paired.stems.size(), options.jobs,
                                      [&](size_t i) -> std::optional<FileError> {
        try {
            LoadedPair pair;
            pair.pred = load_label_mask(read_file(paired.left[i]));
            pair.gt = load_label_mask(read_file(paired.right[i]));
            pair.stem = paired.stems[i];
            if (!pair.pred.same_shape(pair.gt))
                throw Error("shape mismatch: prediction " + std::to_string(pair.pred.height) + "x" +
                            std::to_string(pair.pred.width) + " vs mask " + std::to_string(pair.gt.height) +
                            "x" + std::to_string(pair.gt.width));
            loaded[i] = std::move(pair);
            return std::nullopt;
        } catch (const std::exception& e) {
            return FileError{paired.left[i].string(), e.what()};
        }
    });
    errors.insert(errors.end(), load_errors.begin(), load_errors.end());

    std::vector<LabelMask> pred_masks, gt_masks;
    std::vector<std::string> stems;
    for (auto& slot : loaded) {
        if (!slot) continue;
        pred_masks.push_back(std::move(slot->pred));
        gt_masks.push_back(std::move(slot->gt));
        stems.push_back(slot->stem);
    }
    if (stems.empty()) throw Error("evaluate: no evaluable pairs");

    MetricOptions metric_options;
    metric_options.include_unknown = config.include_unknown;
    metric_options.extra_exclude = config.exclude;

    EvaluationReport report = evaluate_pairs(pred_masks, gt_masks, stems, tree, metric_options);

    json echo = json::parse(config.echo_json);
    echo["command"] = "evaluate";
    echo["images"] = stems;
    write_file_atomic(config.out / "report.json", report_to_json(report, echo.dump(), taxonomy_hash));
    write_file_atomic(config.out / "per_class.csv", report_per_class_csv(report));
    for (const auto& cm : report.confusion)
        write_file_atomic(config.out / ("confusion_" + cm.rank + ".csv"), confusion_csv(cm));

    // Stable stdout columns: per-rank macro F1, then per-class fitted R^2.
    for (const auto& [rank, value] : report.per_rank_macro_f1)
        std::printf("macro_f1 %-12s %.6f\n", rank.c_str(), value);
    for (const auto& stats : report.regression) {
        if (stats.r2_fit)
            std::printf("r2_fit   %-12s %.6f\n", stats.class_id.c_str(), *stats.r2_fit);
        else
            std::printf("r2_fit   %-12s n/a\n", stats.class_id.c_str());
    }

    write_error_log(config.out, errors);
    return errors.empty() ? kExitOk : kExitPartial;
}

int cmd_calibrate(const RunConfig& config, const GlobalOptions& options) {
    std::string taxonomy_hash;
    TaxonomyTree tree = load_taxonomy_checked(config, taxonomy_hash);

    auto probs = expand_globs(config.prob_maps, config.config_dir);
    auto gts = expand_globs(config.masks, config.config_dir);
    if (probs.empty()) throw Error("calibrate: no probability maps matched 'prob_maps'");
    if (gts.empty()) throw Error("calibrate: no masks matched 'masks'");

    fs::create_directories(config.out);
    write_run_echo(config, taxonomy_hash, "calibrate");

    PairedInputs paired = pair_by_stem(probs, gts, "probability map", "mask");
    std::vector<FileError> errors = std::move(paired.errors);

    std::vector<ProbMap> prob_maps;
    std::vector<LabelMask> masks;
    for (size_t i = 0; i < paired.stems.size(); ++i) {
        try {
            ProbMap map = load_prob_map(read_file(paired.left[i]));
            LabelMask gt = load_label_mask(read_file(paired.right[i]));
            if (map.height != gt.height || map.width != gt.width)
                throw Error("shape mismatch between probability map and mask");
            prob_maps.push_back(std::move(map));
            masks.push_back(std::move(gt));
        } catch (const std::exception& e) {
            errors.push_back({paired.left[i].string(), e.what()});
        }
    }
    if (prob_maps.empty()) throw Error("calibrate: no usable validation pairs");

    const CalibrationObjective objective =
        config.objective == "dice" ? CalibrationObjective::dice : CalibrationObjective::f1;
    CalibrationResult result = calibrate_thresholds(prob_maps, masks, tree, objective, config.step);

    json doc;
    doc["objective"] = config.objective;
    doc["step"] = config.step;
    doc["thresholds"] = result.thresholds;
    doc["no_support"] = std::vector<std::string>(result.no_support.begin(), result.no_support.end());
    doc["taxonomy_hash"] = taxonomy_hash;
    write_file_atomic(config.out / "thresholds.json", doc.dump(2) + "\n");

    for (const auto& [leaf, tau] : result.thresholds) {
        const char* flag = result.no_support.count(leaf) ? " (no support)" : "";
        std::printf("tau %-14s %.4f%s\n", leaf.c_str(), tau, flag);
    }
    (void)options;

    write_error_log(config.out, errors);
    return errors.empty() ? kExitOk : kExitPartial;
}

int cmd_weights(const WeightsArgs& args) {
    if (args.classes <= 0) throw Error("weights: --classes must be positive");
    if (args.normalize != "mean-one" && args.normalize != "none")
        throw Error("weights: --normalize must be 'mean-one' or 'none'");

    std::vector<fs::path> files = expand_glob("*.png", args.masks_dir);
    if (files.empty()) throw Error("weights: no .png masks in " + args.masks_dir.string());

    std::vector<LabelMask> masks;
    masks.reserve(files.size());
    for (const auto& f : files) masks.push_back(load_label_mask(read_file(f)));

    PixelCounts counts = count_pixels(masks, args.classes);
    ClassWeights weights = effective_weights(
        counts, args.beta,
        args.normalize == "none" ? WeightNormalization::none : WeightNormalization::mean_one);

    json doc;
    doc["beta"] = args.beta;
    doc["normalization"] = args.normalize;
    doc["counts"] = counts.per_class;
    doc["total"] = counts.total;
    doc["weights"] = weights.per_class;
    const std::string text = doc.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    if (!args.out.empty()) write_file_atomic(args.out, text);
    return kExitOk;
}

int cmd_synth(const SynthArgs& args) {
    json doc;
    try {
        doc = json::parse(read_file(args.spec));
    } catch (const json::exception& e) {
        throw Error("synth spec " + args.spec.string() + " is not valid JSON: " + e.what());
    }

    FieldSpec spec;
    fs::path taxonomy_path;
    try {
        spec.seed = doc.at("seed").get<uint64_t>();
        spec.height = doc.at("height").get<int>();
        spec.width = doc.at("width").get<int>();
        taxonomy_path = fs::path(doc.at("taxonomy").get<std::string>());
        for (const auto& jb : doc.value("blobs", json::array())) {
            Blob blob;
            blob.leaf_id = jb.at("leaf").get<std::string>();
            blob.center_row = jb.at("center").at(0).get<int>();
            blob.center_col = jb.at("center").at(1).get<int>();
            blob.radius = jb.at("radius").get<double>();
            spec.blobs.push_back(std::move(blob));
        }
        if (doc.contains("noise")) {
            spec.noise.flip_prob = doc.at("noise").value("flip_prob", 0.0);
            spec.noise.dirichlet_sharpness = doc.at("noise").value("dirichlet_sharpness", 1e6);
        }
    } catch (const json::exception& e) {
        throw Error("synth spec schema error: " + std::string(e.what()));
    }

    const fs::path spec_dir = args.spec.has_parent_path() ? args.spec.parent_path() : fs::path(".");
    if (!taxonomy_path.is_absolute()) taxonomy_path = spec_dir / taxonomy_path;
    const std::string taxonomy_bytes = read_file(taxonomy_path);
    TaxonomyTree tree = parse_taxonomy(taxonomy_bytes);

    Field field = generate_field(spec, tree);

    const std::string stem = args.spec.stem().string();
    fs::create_directories(args.out_dir);
    write_file_atomic(args.out_dir / (stem + ".npy"), store_prob_map(field.prob_map));
    write_file_atomic(args.out_dir / (stem + ".png"), store_label_mask(field.mask));

    json echo = doc;
    echo["taxonomy_hash"] = content_hash_hex(taxonomy_bytes);
    write_file_atomic(args.out_dir / (stem + ".spec.json"), echo.dump(2) + "\n");
    return kExitOk;
}

}  // namespace taxoseg::cli
