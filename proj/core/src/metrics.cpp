// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "taxoseg/metrics.hpp"

#include <cmath>

#include "taxoseg/error.hpp"

namespace taxoseg {
namespace {

void require_pairs(const std::vector<LabelMask>& preds, const std::vector<LabelMask>& gts) {
    if (preds.size() != gts.size()) throw Error("metrics: prediction/ground-truth list size mismatch");
    for (size_t i = 0; i < preds.size(); ++i)
        if (!preds[i].same_shape(gts[i]))
            throw Error("metrics: shape mismatch in pair " + std::to_string(i) + " (" +
                        std::to_string(preds[i].height) + "x" + std::to_string(preds[i].width) + " vs " +
                        std::to_string(gts[i].height) + "x" + std::to_string(gts[i].width) + ")");
}

void require_channel(uint8_t value, int channels, const char* side, size_t image) {
    if (value != LabelMask::kIgnore && value >= channels)
        throw Error(std::string("metrics: ") + side + " mask " + std::to_string(image) +
                    " contains class " + std::to_string(value) + " beyond the taxonomy's " +
                    std::to_string(channels) + " channels");
}

// A rank class is excluded only when every leaf underneath it is excluded;
// the misc leaf never counts as excluded.
std::vector<bool> excluded_classes(const TaxonomyTree& tree, const RankView& view,
                                   const MetricOptions& options) {
    std::vector<bool> leaf_excluded(tree.channel_count(), false);
    for (int c = 0; c < tree.channel_count(); ++c) {
        const std::string& id = tree.channel_binding()[c];
        bool excluded = false;
        if (!options.include_unknown && tree.is_unknown_channel(c)) excluded = true;
        if (options.extra_exclude.count(id)) excluded = true;
        if (tree.misc_channel() && c == *tree.misc_channel()) excluded = false;
        leaf_excluded[c] = excluded;
    }
    std::vector<bool> out(view.class_nodes.size(), true);
    for (int c = 0; c < tree.channel_count(); ++c)
        if (!leaf_excluded[c]) out[view.channel_to_class[c]] = false;
    return out;
}

}  // namespace

uint64_t ConfusionMatrix::row_sum(int row) const {
    uint64_t sum = 0;
    for (int col = 0; col < size(); ++col) sum += count(row, col);
    return sum;
}

std::vector<double> ConfusionMatrix::normalized() const {
    const int k = size();
    std::vector<double> out(static_cast<size_t>(k) * k, 0.0);
    for (int row = 0; row < k; ++row) {
        const uint64_t sum = row_sum(row);
        if (sum == 0) continue;
        const double inv = 1.0 / static_cast<double>(sum);
        for (int col = 0; col < k; ++col)
            out[static_cast<size_t>(row) * k + col] = static_cast<double>(count(row, col)) * inv;
    }
    return out;
}

ConfusionMatrix confusion_at_rank(const std::vector<LabelMask>& preds,
                                  const std::vector<LabelMask>& gts,
                                  const TaxonomyTree& tree, const std::string& rank) {
    require_pairs(preds, gts);
    const int rank_idx = tree.rank_index(rank);
    if (rank_idx < 0) throw Error("confusion_at_rank: unknown rank '" + rank + "'");
    const RankView view = make_rank_view(tree, rank_idx);

    ConfusionMatrix cm;
    cm.rank = rank;
    for (int node : view.class_nodes) cm.class_ids.push_back(tree.node(node).id);
    const int k = cm.size();
    cm.counts.assign(static_cast<size_t>(k) * k, 0);

    const int channels = tree.channel_count();
    for (size_t i = 0; i < preds.size(); ++i) {
        const auto& pred = preds[i];
        const auto& gt = gts[i];
        for (size_t px = 0; px < gt.data.size(); ++px) {
            const uint8_t g = gt.data[px];
            if (g == LabelMask::kIgnore) continue;
            const uint8_t p = pred.data[px];
            require_channel(g, channels, "ground-truth", i);
            require_channel(p, channels, "prediction", i);
            if (p == LabelMask::kIgnore) continue;
            ++cm.count(view.channel_to_class[g], view.channel_to_class[p]);
        }
    }
    return cm;
}

ScoreSet scores_at_rank(const std::vector<LabelMask>& preds, const std::vector<LabelMask>& gts,
                        const TaxonomyTree& tree, const std::string& rank,
                        const MetricOptions& options) {
    const ConfusionMatrix cm = confusion_at_rank(preds, gts, tree, rank);
    const RankView view = make_rank_view(tree, tree.rank_index(rank));
    const std::vector<bool> excluded = excluded_classes(tree, view, options);

    ScoreSet set;
    const int k = cm.size();
    std::vector<uint64_t> col_sums(k, 0);
    for (int row = 0; row < k; ++row)
        for (int col = 0; col < k; ++col) col_sums[col] += cm.count(row, col);

    double f1_sum = 0.0;
    for (int c = 0; c < k; ++c) {
        ClassScore score;
        score.class_id = cm.class_ids[c];
        score.tp = cm.count(c, c);
        score.fp = col_sums[c] - score.tp;
        score.fn = cm.row_sum(c) - score.tp;
        score.present = (score.tp + score.fp + score.fn) > 0;
        if (score.tp > 0) {
            score.precision = static_cast<double>(score.tp) / static_cast<double>(score.tp + score.fp);
            score.recall = static_cast<double>(score.tp) / static_cast<double>(score.tp + score.fn);
            score.f1 = 2.0 * score.precision * score.recall / (score.precision + score.recall);
        }
        score.included = score.present && !excluded[c];
        if (score.included) {
            f1_sum += score.f1;
            ++set.included_classes;
        }
        set.per_class.push_back(std::move(score));
    }
    set.macro_f1 = set.included_classes > 0 ? f1_sum / set.included_classes : 0.0;
    return set;
}

ScoreSet f1_scores(const std::vector<LabelMask>& preds, const std::vector<LabelMask>& gts,
                   const TaxonomyTree& tree, const MetricOptions& options) {
    return scores_at_rank(preds, gts, tree, tree.rank_order().front(), options);
}

std::vector<DiceScore> dice_scores(const std::vector<LabelMask>& preds,
                                   const std::vector<LabelMask>& gts, const TaxonomyTree& tree) {
    require_pairs(preds, gts);
    const int channels = tree.channel_count();
    std::vector<DiceScore> out(channels);
    for (int c = 0; c < channels; ++c) out[c].class_id = tree.channel_binding()[c];

    for (size_t i = 0; i < preds.size(); ++i) {
        const auto& pred = preds[i];
        const auto& gt = gts[i];
        for (size_t px = 0; px < gt.data.size(); ++px) {
            const uint8_t g = gt.data[px];
            if (g == LabelMask::kIgnore) continue;
            const uint8_t p = pred.data[px];
            require_channel(g, channels, "ground-truth", i);
            require_channel(p, channels, "prediction", i);
            ++out[g].gt_pixels;
            if (p == LabelMask::kIgnore) continue;
            ++out[p].pred_pixels;
            if (p == g) ++out[g].intersection;
        }
    }
    for (auto& d : out) {
        const uint64_t denom = d.pred_pixels + d.gt_pixels;
        d.present = denom > 0;
        d.dice = denom > 0 ? 2.0 * static_cast<double>(d.intersection) / static_cast<double>(denom) : 0.0;
    }
    return out;
}

CoverageValue image_coverage(const LabelMask& grid, int channel) {
    uint64_t hits = 0, support = 0;
    for (uint8_t v : grid.data) {
        if (v == LabelMask::kIgnore) continue;
        ++support;
        if (v == channel) ++hits;
    }
    if (support == 0) return {0.0, true};
    return {static_cast<double>(hits) / static_cast<double>(support), false};
}

std::vector<CoveragePair> coverage_pairs(const LabelMask& pred, const LabelMask& gt,
                                         const std::string& image_id, const TaxonomyTree& tree) {
    if (!pred.same_shape(gt)) throw Error("coverage_pairs: shape mismatch for image " + image_id);
    const int channels = tree.channel_count();
    std::vector<uint64_t> annotated(channels, 0), predicted(channels, 0);
    uint64_t support = 0;
    for (size_t px = 0; px < gt.data.size(); ++px) {
        const uint8_t g = gt.data[px];
        if (g == LabelMask::kIgnore) continue;
        require_channel(g, channels, "ground-truth", 0);
        ++support;
        ++annotated[g];
        const uint8_t p = pred.data[px];
        if (p == LabelMask::kIgnore) continue;
        require_channel(p, channels, "prediction", 0);
        ++predicted[p];
    }
    std::vector<CoveragePair> out;
    out.reserve(channels);
    const double inv = support > 0 ? 1.0 / static_cast<double>(support) : 0.0;
    for (int c = 0; c < channels; ++c) {
        CoveragePair pair;
        pair.image_id = image_id;
        pair.class_id = tree.channel_binding()[c];
        pair.annotated_fraction = static_cast<double>(annotated[c]) * inv;
        pair.predicted_fraction = static_cast<double>(predicted[c]) * inv;
        out.push_back(std::move(pair));
    }
    return out;
}

RegressionStats coverage_regression(const std::vector<CoveragePair>& pairs) {
    RegressionStats stats;
    if (!pairs.empty()) stats.class_id = pairs.front().class_id;
    stats.n = static_cast<int>(pairs.size());
    if (stats.n < 2) {
        stats.flags.push_back("insufficient-points");
        return stats;
    }

    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& p : pairs) {
        mean_x += p.annotated_fraction;
        mean_y += p.predicted_fraction;
    }
    mean_x /= stats.n;
    mean_y /= stats.n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0, ss_id = 0.0;
    for (const auto& p : pairs) {
        const double dx = p.annotated_fraction - mean_x;
        const double dy = p.predicted_fraction - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
        const double e = p.predicted_fraction - p.annotated_fraction;
        ss_id += e * e;
    }

    // Accumulated rounding of repeated equal values never exceeds this.
    const double degenerate = static_cast<double>(stats.n) * 1e-30;
    const bool x_varies = sxx > degenerate;
    const bool y_varies = syy > degenerate;

    if (!x_varies) stats.flags.push_back("zero-x-variance");
    if (!y_varies) stats.flags.push_back("zero-y-variance");

    if (x_varies) {
        const double slope = sxy / sxx;
        const double intercept = mean_y - slope * mean_x;
        double ss_res = 0.0;
        for (const auto& p : pairs) {
            const double e = p.predicted_fraction - (intercept + slope * p.annotated_fraction);
            ss_res += e * e;
        }
        stats.slope = slope;
        stats.intercept = intercept;
        stats.rmse = std::sqrt(ss_res / stats.n);
        if (y_varies) stats.r2_fit = 1.0 - ss_res / syy;
    }
    if (y_varies) stats.r2_identity = 1.0 - ss_id / syy;
    return stats;
}

EvaluationReport evaluate_pairs(const std::vector<LabelMask>& preds,
                                const std::vector<LabelMask>& gts,
                                const std::vector<std::string>& image_ids,
                                const TaxonomyTree& tree, const MetricOptions& options) {
    require_pairs(preds, gts);
    if (image_ids.size() != preds.size()) throw Error("evaluate_pairs: image id list size mismatch");

    EvaluationReport report;
    for (const auto& rank : tree.rank_order()) {
        report.confusion.push_back(confusion_at_rank(preds, gts, tree, rank));
        report.per_rank_macro_f1.emplace_back(rank, scores_at_rank(preds, gts, tree, rank, options).macro_f1);
    }
    report.leaf_scores = f1_scores(preds, gts, tree, options);
    report.leaf_dice = dice_scores(preds, gts, tree);

    for (size_t i = 0; i < preds.size(); ++i) {
        auto pairs = coverage_pairs(preds[i], gts[i], image_ids[i], tree);
        report.coverage.insert(report.coverage.end(), pairs.begin(), pairs.end());
    }
    for (int c = 0; c < tree.channel_count(); ++c) {
        std::vector<CoveragePair> class_pairs;
        for (const auto& p : report.coverage)
            if (p.class_id == tree.channel_binding()[c]) class_pairs.push_back(p);
        auto stats = coverage_regression(class_pairs);
        stats.class_id = tree.channel_binding()[c];
        report.regression.push_back(std::move(stats));
    }
    return report;
}

}  // namespace taxoseg
