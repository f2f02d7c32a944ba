// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "taxoseg/error.hpp"
#include "taxoseg/metrics.hpp"

namespace taxoseg {
namespace {

// Pooled objective for one leaf class over thresholded predictions.
double class_objective(const std::vector<PredictionMap>& preds, const std::vector<LabelMask>& gts,
                       int channel, CalibrationObjective objective) {
    uint64_t tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < preds.size(); ++i) {
        const auto& pred = preds[i];
        const auto& gt = gts[i];
        for (size_t px = 0; px < gt.data.size(); ++px) {
            const uint8_t g = gt.data[px];
            if (g == LabelMask::kIgnore) continue;
            const bool hit_gt = g == channel;
            const bool hit_pred = pred.chosen_leaf[px] == channel;
            if (hit_gt && hit_pred) ++tp;
            else if (hit_pred) ++fp;
            else if (hit_gt) ++fn;
        }
    }
    if (tp == 0) return 0.0;
    switch (objective) {
        case CalibrationObjective::f1: {
            const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
            const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
            return 2.0 * precision * recall / (precision + recall);
        }
        case CalibrationObjective::dice:
            return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    }
    return 0.0;
}

}  // namespace

CalibrationResult calibrate_thresholds(const std::vector<ProbMap>& probs,
                                       const std::vector<LabelMask>& gts,
                                       const TaxonomyTree& tree,
                                       CalibrationObjective objective, double step) {
    if (probs.empty()) throw Error("calibrate_thresholds: empty validation set");
    if (probs.size() != gts.size()) throw Error("calibrate_thresholds: prob/mask list size mismatch");
    if (!(step > 0.0 && step < 1.0)) throw Error("calibrate_thresholds: step must lie in (0,1)");
    if (!tree.misc_channel()) throw Error("calibrate_thresholds: taxonomy declares no misc leaf");

    // The base decision is computed once; each candidate threshold re-applies
    // the fallback on top of it.
    std::vector<PredictionMap> base;
    base.reserve(probs.size());
    for (const auto& p : probs) base.push_back(hierarchical_argmax(aggregate_to_nodes(p, tree), tree));

    std::vector<bool> in_gt(tree.channel_count(), false);
    for (const auto& gt : gts)
        for (uint8_t v : gt.data)
            if (v != LabelMask::kIgnore) in_gt[v] = true;

    // tau grid {0, step, 2 step, ..., 1}.
    std::vector<double> grid;
    const int steps = static_cast<int>(std::floor(1.0 / step + 1e-9));
    for (int k = 0; k <= steps; ++k) grid.push_back(std::min(1.0, k * step));
    if (grid.back() < 1.0) grid.push_back(1.0);

    CalibrationResult result;
    result.objective = objective;
    result.step = step;

    const int misc = *tree.misc_channel();
    for (int c = 0; c < tree.channel_count(); ++c) {
        if (c == misc) continue;
        const std::string& leaf = tree.channel_binding()[c];
        if (!in_gt[c]) {
            result.thresholds[leaf] = 0.0;
            result.no_support.insert(leaf);
            continue;
        }
        double best_tau = 0.0;
        double best_score = -1.0;
        for (double tau : grid) {
            std::vector<PredictionMap> thresholded;
            thresholded.reserve(base.size());
            for (const auto& pred : base)
                thresholded.push_back(apply_confidence_thresholds(pred, {{leaf, tau}}, tree));
            const double score = class_objective(thresholded, gts, c, objective);
            if (score > best_score) {
                best_score = score;
                best_tau = tau;
            }
        }
        result.thresholds[leaf] = best_tau;
    }
    return result;
}

}  // namespace taxoseg
