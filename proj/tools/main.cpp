// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <cstdio>
#include <exception>

#include "commands.hpp"
#include "config.hpp"

namespace cli = taxoseg::cli;

int main(int argc, char** argv) {
    CLI::App app{"taxoseg: taxonomy-aware segmentation inference and evaluation"};
    app.require_subcommand(1);

    cli::GlobalOptions options;
    app.add_option("--jobs", options.jobs, "Worker threads for per-file batch work")->capture_default_str();
    app.add_flag("--verbose", options.verbose, "Log per-file progress to stderr");

    std::string config_path;
    auto add_config = [&config_path](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Run configuration JSON")->required();
    };

    CLI::App* infer = app.add_subcommand("infer", "Hierarchical inference over probability maps");
    add_config(infer);
    CLI::App* evaluate = app.add_subcommand("evaluate", "Metric battery over paired predictions and masks");
    add_config(evaluate);
    CLI::App* calibrate = app.add_subcommand("calibrate", "Per-class confidence threshold sweep");
    add_config(calibrate);

    cli::WeightsArgs weights_args;
    CLI::App* weights = app.add_subcommand("weights", "Class-balanced weights from mask pixel counts");
    weights->add_option("--masks", weights_args.masks_dir, "Directory of 8-bit label masks")->required();
    weights->add_option("--classes", weights_args.classes, "Number of classes")->required();
    weights->add_option("--beta", weights_args.beta, "Effective-number beta in [0,1)")->capture_default_str();
    weights->add_option("--normalize", weights_args.normalize, "mean-one or none")->capture_default_str();
    weights->add_option("--out", weights_args.out, "Also write the JSON to this file");

    cli::SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Deterministic synthetic field fixture");
    synth->add_option("--spec", synth_args.spec, "Field spec JSON")->required();
    synth->add_option("--out", synth_args.out_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (infer->parsed()) return cli::cmd_infer(cli::load_run_config(config_path), options);
        if (evaluate->parsed()) return cli::cmd_evaluate(cli::load_run_config(config_path), options);
        if (calibrate->parsed()) return cli::cmd_calibrate(cli::load_run_config(config_path), options);
        if (weights->parsed()) return cli::cmd_weights(weights_args);
        if (synth->parsed()) return cli::cmd_synth(synth_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "taxoseg: %s\n", e.what());
        return cli::kExitConfig;
    }
    return cli::kExitConfig;
}
