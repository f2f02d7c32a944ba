// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "taxoseg/hierinfer.hpp"

#include <algorithm>

#include "taxoseg/error.hpp"

namespace taxoseg {
namespace {

// Fills ranks/tables and sizes the per-rank planes of a PredictionMap.
struct RankLayout {
    std::vector<RankView> views;

    explicit RankLayout(const TaxonomyTree& tree) {
        const int n_ranks = static_cast<int>(tree.rank_order().size());
        views.reserve(n_ranks);
        for (int r = 0; r < n_ranks; ++r) views.push_back(make_rank_view(tree, r));
    }

    void init(PredictionMap& pred, const TaxonomyTree& tree, int height, int width) const {
        pred.height = height;
        pred.width = width;
        const size_t pixels = static_cast<size_t>(height) * width;
        pred.chosen_leaf.assign(pixels, 0);
        pred.ranks = tree.rank_order();
        pred.rank_tables.clear();
        for (const auto& view : views) {
            std::vector<std::string> table;
            table.reserve(view.class_nodes.size());
            for (int node : view.class_nodes) table.push_back(tree.node(node).id);
            pred.rank_tables.push_back(std::move(table));
        }
        pred.rank_choice.assign(views.size(), std::vector<int32_t>(pixels, 0));
        pred.rank_confidence.assign(views.size(), std::vector<float>(pixels, 0.0f));
    }
};

}  // namespace

NodeProbMaps aggregate_to_nodes(const ProbMap& map, const TaxonomyTree& tree) {
    if (map.channels != tree.channel_count())
        throw Error("aggregate_to_nodes: map has " + std::to_string(map.channels) +
                    " channels but taxonomy binds " + std::to_string(tree.channel_count()) + " leaves");

    NodeProbMaps out;
    out.height = map.height;
    out.width = map.width;
    const size_t pixels = map.pixel_count();
    out.node_values.assign(tree.node_count(), {});

    for (int n = 0; n < tree.node_count(); ++n) {
        const auto& channels = tree.channels_under(n);
        auto& plane = out.node_values[n];
        plane.resize(pixels);
        if (channels.size() == 1) {
            const int ch = channels.front();
            for (size_t px = 0; px < pixels; ++px) plane[px] = map.data[px * map.channels + ch];
        } else {
            for (size_t px = 0; px < pixels; ++px) {
                double sum = 0.0;
                const float* p = &map.data[px * map.channels];
                for (int ch : channels) sum += p[ch];
                plane[px] = static_cast<float>(sum);
            }
        }
    }
    return out;
}

PredictionMap hierarchical_argmax(const NodeProbMaps& nodes, const TaxonomyTree& tree) {
    const size_t pixels = static_cast<size_t>(nodes.height) * nodes.width;
    RankLayout layout(tree);
    PredictionMap pred;
    layout.init(pred, tree, nodes.height, nodes.width);

    const int root = tree.root_index();
    for (size_t px = 0; px < pixels; ++px) {
        int cur = root;
        while (!tree.is_leaf(cur)) {
            const auto& children = tree.children_of(cur);
            int best = children.front();
            float best_value = nodes.value(best, px);
            for (size_t i = 1; i < children.size(); ++i) {
                const int child = children[i];
                const float v = nodes.value(child, px);
                if (v > best_value ||
                    (v == best_value && tree.first_channel_under(child) < tree.first_channel_under(best))) {
                    best = child;
                    best_value = v;
                }
            }
            cur = best;
        }
        const int leaf_channel = tree.channels_under(cur).front();
        pred.chosen_leaf[px] = static_cast<uint8_t>(leaf_channel);
        for (size_t r = 0; r < layout.views.size(); ++r) {
            const auto& view = layout.views[r];
            const int cls = view.channel_to_class[leaf_channel];
            pred.rank_choice[r][px] = cls;
            pred.rank_confidence[r][px] = nodes.value(view.class_nodes[cls], px);
        }
    }
    return pred;
}

PredictionMap flat_argmax(const ProbMap& map, const TaxonomyTree& tree) {
    if (map.channels != tree.channel_count())
        throw Error("flat_argmax: map has " + std::to_string(map.channels) +
                    " channels but taxonomy binds " + std::to_string(tree.channel_count()) + " leaves");

    RankLayout layout(tree);
    PredictionMap pred;
    layout.init(pred, tree, map.height, map.width);

    const size_t pixels = map.pixel_count();
    for (size_t px = 0; px < pixels; ++px) {
        const float* p = &map.data[px * map.channels];
        int best = 0;
        for (int ch = 1; ch < map.channels; ++ch)
            if (p[ch] > p[best]) best = ch;
        pred.chosen_leaf[px] = static_cast<uint8_t>(best);
        const float confidence = p[best];
        for (size_t r = 0; r < layout.views.size(); ++r) {
            pred.rank_choice[r][px] = layout.views[r].channel_to_class[best];
            pred.rank_confidence[r][px] = confidence;
        }
    }
    return pred;
}

PredictionMap apply_confidence_thresholds(const PredictionMap& pred,
                                          const std::map<std::string, double>& thresholds,
                                          const TaxonomyTree& tree) {
    if (thresholds.empty()) return pred;
    if (!tree.misc_channel())
        throw Error("apply_confidence_thresholds: taxonomy declares no misc leaf to fall back to");

    // Per-channel threshold lookup; -1 marks "no threshold".
    std::vector<double> tau(tree.channel_count(), -1.0);
    for (const auto& [leaf, value] : thresholds) {
        const int channel = tree.channel_of_leaf(leaf);
        if (channel < 0) throw Error("apply_confidence_thresholds: unknown leaf id '" + leaf + "'");
        if (channel == *tree.misc_channel())
            throw Error("apply_confidence_thresholds: misc has no threshold");
        if (value < 0.0 || value > 1.0)
            throw Error("apply_confidence_thresholds: threshold for '" + leaf + "' outside [0,1]");
        tau[channel] = value;
    }

    const int misc = *tree.misc_channel();
    RankLayout layout(tree);
    PredictionMap out = pred;
    const size_t pixels = pred.pixel_count();
    for (size_t px = 0; px < pixels; ++px) {
        const int leaf = out.chosen_leaf[px];
        if (tau[leaf] < 0.0) continue;
        const float confidence = out.rank_confidence[0][px];
        if (confidence >= tau[leaf]) continue;
        out.chosen_leaf[px] = static_cast<uint8_t>(misc);
        for (size_t r = 0; r < layout.views.size(); ++r)
            out.rank_choice[r][px] = layout.views[r].channel_to_class[misc];
        // Confidence values carry over from the rejected decision.
    }
    return out;
}

LabelMask to_label_mask(const PredictionMap& pred) {
    LabelMask mask(pred.height, pred.width);
    std::copy(pred.chosen_leaf.begin(), pred.chosen_leaf.end(), mask.data.begin());
    return mask;
}

}  // namespace taxoseg
