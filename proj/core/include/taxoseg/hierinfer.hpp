// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_HIERINFER_HPP
#define TAXOSEG_HIERINFER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "taxoseg/grid.hpp"
#include "taxoseg/taxonomy.hpp"

namespace taxoseg {

// Aggregated probability mass per taxonomy node: value(n) is the sum of the
// leaf channels below n, so siblings always sum to their parent and the root
// carries the full softmax mass.
struct NodeProbMaps {
    int height = 0;
    int width = 0;
    std::vector<std::vector<float>> node_values;  // [tree node index][pixel]

    float value(int node_index, size_t pixel) const { return node_values[node_index][pixel]; }
};

// Per-pixel decision with the full taxonomic context: the chosen leaf
// channel, the chosen node at every rank (as an index into that rank's
// class table), and the aggregated probability of that node (the
// hierarchical confidence).
struct PredictionMap {
    int height = 0;
    int width = 0;
    std::vector<uint8_t> chosen_leaf;  // leaf channel per pixel

    std::vector<std::string> ranks;                     // leaf-first rank names
    std::vector<std::vector<std::string>> rank_tables;  // node ids per rank class
    std::vector<std::vector<int32_t>> rank_choice;      // [rank][pixel] -> class table index
    std::vector<std::vector<float>> rank_confidence;    // [rank][pixel]

    size_t pixel_count() const { return chosen_leaf.size(); }
    // The chosen node id for a pixel at one rank.
    const std::string& chosen_at(int rank, size_t pixel) const {
        return rank_tables[rank][rank_choice[rank][pixel]];
    }
};

// Sums every leaf channel into its ancestors. Leaves are copied through.
NodeProbMaps aggregate_to_nodes(const ProbMap& map, const TaxonomyTree& tree);

// Recursive argmax over the taxonomy: per pixel, descend from the root
// taking the child with maximal aggregated mass (ties to the child with the
// lowest first leaf channel) until a leaf is reached. Keeping whole subtrees
// in play prevents probability mass from spreading over many similar leaves
// and losing to a single concentrated competitor.
PredictionMap hierarchical_argmax(const NodeProbMaps& nodes, const TaxonomyTree& tree);

// Baseline: plain per-pixel channel argmax (lowest channel on ties). The
// winning leaf probability is carried as the confidence at every rank.
PredictionMap flat_argmax(const ProbMap& map, const TaxonomyTree& tree);

// Reassigns pixels whose leaf-rank confidence falls below their class
// threshold to the misc leaf (confidence value carried over, per-rank
// choices re-projected). Comparison keeps the pixel when confidence >= tau.
PredictionMap apply_confidence_thresholds(const PredictionMap& pred,
                                          const std::map<std::string, double>& thresholds,
                                          const TaxonomyTree& tree);

// Converts the chosen-leaf plane to a LabelMask (no ignore pixels).
LabelMask to_label_mask(const PredictionMap& pred);

}  // namespace taxoseg

#endif
