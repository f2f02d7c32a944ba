// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_METRICS_HPP
#define TAXOSEG_METRICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "taxoseg/grid.hpp"
#include "taxoseg/hierinfer.hpp"
#include "taxoseg/taxonomy.hpp"

namespace taxoseg {

// Row = annotated class, column = predicted class ("13% of the annotated X
// was predicted as Y" reads along a row of the normalized matrix).
struct ConfusionMatrix {
    std::string rank;
    std::vector<std::string> class_ids;
    std::vector<uint64_t> counts;  // K*K row-major

    int size() const { return static_cast<int>(class_ids.size()); }
    uint64_t count(int row, int col) const { return counts[static_cast<size_t>(row) * size() + col]; }
    uint64_t& count(int row, int col) { return counts[static_cast<size_t>(row) * size() + col]; }
    uint64_t row_sum(int row) const;
    bool row_has_support(int row) const { return row_sum(row) > 0; }

    // Row-normalized matrix; rows without support stay all-zero.
    std::vector<double> normalized() const;
};

struct ClassScore {
    std::string class_id;
    uint64_t tp = 0, fp = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    bool present = false;   // appears in ground truth or prediction
    bool included = false;  // participates in the macro average
};

struct ScoreSet {
    std::vector<ClassScore> per_class;
    double macro_f1 = 0.0;
    int included_classes = 0;
};

// Dice is tallied from set sizes rather than the precision/recall route, so
// the two scores cross-check each other (they agree under pooled counting).
struct DiceScore {
    std::string class_id;
    uint64_t pred_pixels = 0, gt_pixels = 0, intersection = 0;
    double dice = 0.0;
    bool present = false;
};

struct CoveragePair {
    std::string image_id;
    std::string class_id;
    double annotated_fraction = 0.0;
    double predicted_fraction = 0.0;
};

struct RegressionStats {
    std::string class_id;
    int n = 0;
    std::optional<double> slope, intercept, r2_fit, r2_identity, rmse;
    std::vector<std::string> flags;  // insufficient-points, zero-x-variance, zero-y-variance
};

struct MetricOptions {
    // Leaves flagged unknown (other-*) model annotation uncertainty and stay
    // out of the macro average unless explicitly included. misc is always in.
    bool include_unknown = false;
    std::set<std::string> extra_exclude;
};

struct EvaluationReport {
    std::vector<ConfusionMatrix> confusion;                       // one per rank, leaf-first
    ScoreSet leaf_scores;                                         // per-class F1 at leaf rank
    std::vector<DiceScore> leaf_dice;                             // channel order
    std::vector<std::pair<std::string, double>> per_rank_macro_f1;
    std::vector<CoveragePair> coverage;                           // per image x class
    std::vector<RegressionStats> regression;                      // per leaf class
};

// Both sides are projected to `rank` through the taxonomy before tallying;
// ignore pixels are skipped.
ConfusionMatrix confusion_at_rank(const std::vector<LabelMask>& preds,
                                  const std::vector<LabelMask>& gts,
                                  const TaxonomyTree& tree, const std::string& rank);

// Pooled-pixel precision/recall/F1 per class at a rank. F1 is 0 when TP = 0
// with errors present; classes absent from both sides are excluded.
ScoreSet scores_at_rank(const std::vector<LabelMask>& preds, const std::vector<LabelMask>& gts,
                        const TaxonomyTree& tree, const std::string& rank,
                        const MetricOptions& options = {});

// Leaf-rank convenience wrapper.
ScoreSet f1_scores(const std::vector<LabelMask>& preds, const std::vector<LabelMask>& gts,
                   const TaxonomyTree& tree, const MetricOptions& options = {});

std::vector<DiceScore> dice_scores(const std::vector<LabelMask>& preds,
                                   const std::vector<LabelMask>& gts, const TaxonomyTree& tree);

struct CoverageValue {
    double fraction = 0.0;
    bool undefined = false;  // no non-ignore pixels in the image
};

// (pixels of the class) / (non-ignore pixels). Undefined-flagged 0 when the
// image has no countable pixels.
CoverageValue image_coverage(const LabelMask& grid, int channel);

// Annotated and predicted fractions for every class of one image, both over
// the ground truth's non-ignore support so the pair shares a denominator.
std::vector<CoveragePair> coverage_pairs(const LabelMask& pred, const LabelMask& gt,
                                         const std::string& image_id, const TaxonomyTree& tree);

// Ordinary least squares of predicted (y) on annotated (x) coverage, with
// both the fitted-line R^2 and the residual-against-identity R^2.
RegressionStats coverage_regression(const std::vector<CoveragePair>& pairs);

// Full battery over paired prediction/ground-truth masks.
EvaluationReport evaluate_pairs(const std::vector<LabelMask>& preds,
                                const std::vector<LabelMask>& gts,
                                const std::vector<std::string>& image_ids,
                                const TaxonomyTree& tree, const MetricOptions& options = {});

// Threshold calibration ------------------------------------------------------

enum class CalibrationObjective { f1, dice };

struct CalibrationResult {
    std::map<std::string, double> thresholds;  // leaf id -> tau (misc excluded)
    std::set<std::string> no_support;          // leaves absent from ground truth (tau = 0)
    CalibrationObjective objective = CalibrationObjective::f1;
    double step = 0.0;
};

// Per-leaf one-at-a-time sweep of tau over {0, step, 2 step, ..., 1}: each
// candidate runs the hierarchical decision plus threshold fallback with only
// that leaf's threshold active and scores that leaf; ties take the lowest tau.
CalibrationResult calibrate_thresholds(const std::vector<ProbMap>& probs,
                                       const std::vector<LabelMask>& gts,
                                       const TaxonomyTree& tree,
                                       CalibrationObjective objective = CalibrationObjective::f1,
                                       double step = 0.01);

}  // namespace taxoseg

#endif
