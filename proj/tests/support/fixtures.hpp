// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_TESTS_FIXTURES_HPP
#define TAXOSEG_TESTS_FIXTURES_HPP

#include <random>
#include <string>
#include <vector>

#include "taxoseg/fsio.hpp"
#include "taxoseg/grid.hpp"
#include "taxoseg/taxonomy.hpp"

namespace taxoseg::testing {

// Two-genus fixture: {a1, a2} under genus A, {b1} under genus B. The
// canonical anti-spreading example lives on this tree.
inline TaxonomySource three_leaf_source() {
    TaxonomySource src;
    src.rank_order = {"leaf", "genus", "root"};
    src.nodes = {
        {"root", "root", "root", std::nullopt},
        {"A", "genus A", "genus", "root"},
        {"B", "genus B", "genus", "root"},
        {"a1", "species a1", "leaf", "A"},
        {"a2", "species a2", "leaf", "A"},
        {"b1", "species b1", "leaf", "B"},
    };
    src.channel_binding = {"a1", "a2", "b1"};
    return src;
}

inline TaxonomyTree three_leaf_tree() { return TaxonomyTree::compile(three_leaf_source()); }

// Flat three-class tree with a misc fallback; used by threshold tests.
inline TaxonomyTree flat_misc_tree() {
    TaxonomySource src;
    src.rank_order = {"leaf", "root"};
    src.nodes = {
        {"root", "root", "root", std::nullopt},
        {"c", "class c", "leaf", "root"},
        {"d", "class d", "leaf", "root"},
        {"misc", "misc", "leaf", "root"},
    };
    src.channel_binding = {"c", "d", "misc"};
    src.misc = "misc";
    return TaxonomyTree::compile(src);
}

inline TaxonomyTree species_tree() {
    return parse_taxonomy(read_file(std::string(TAXOSEG_DATA_DIR) + "/taxonomies/species.json"));
}

inline TaxonomyTree damage_tree() {
    return parse_taxonomy(read_file(std::string(TAXOSEG_DATA_DIR) + "/taxonomies/damage.json"));
}

// Random taxonomy with rank gaps: up to `max_ranks` ranks and roughly up to
// `max_leaves` leaves. Internal nodes may sit at any rank, leaves may attach
// anywhere, and every internal node keeps at least one leaf below it.
inline TaxonomyTree random_tree(std::mt19937& rng, int max_ranks = 5, int max_leaves = 50) {
    const int n_ranks = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_ranks - 1));
    TaxonomySource src;
    src.rank_order.push_back("leaf");
    for (int r = 1; r < n_ranks - 1; ++r) src.rank_order.push_back("r" + std::to_string(r));
    src.rank_order.push_back("root");

    src.nodes.push_back({"root", "root", "root", std::nullopt});
    struct Internal {
        std::string id;
        int rank;
    };
    std::vector<Internal> internals = {{"root", n_ranks - 1}};

    // A few internal nodes per middle rank, attached upward at random.
    int serial = 0;
    for (int r = n_ranks - 2; r >= 1; --r) {
        const int count = static_cast<int>(rng() % 3);
        for (int i = 0; i < count; ++i) {
            std::vector<const Internal*> above;
            for (const auto& n : internals)
                if (n.rank > r) above.push_back(&n);
            const Internal* parent = above[rng() % above.size()];
            std::string id = "n" + std::to_string(serial++);
            src.nodes.push_back({id, id, src.rank_order[r], parent->id});
            internals.push_back({id, r});
        }
    }

    const int n_leaves = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_leaves - internals.size()));
    for (int i = 0; i < n_leaves; ++i) {
        const Internal& parent = internals[rng() % internals.size()];
        std::string id = "leaf" + std::to_string(i);
        src.nodes.push_back({id, id, "leaf", parent.id});
        src.channel_binding.push_back(id);
    }
    // Adopt a leaf into any internal node that ended up barren.
    for (const auto& internal : internals) {
        bool covered = false;
        for (const auto& n : src.nodes) {
            if (n.rank != "leaf") continue;
            std::string cur = n.id;
            while (true) {
                const TaxonNode* node = nullptr;
                for (const auto& m : src.nodes)
                    if (m.id == cur) node = &m;
                if (!node->parent_id) break;
                if (*node->parent_id == internal.id) {
                    covered = true;
                    break;
                }
                cur = *node->parent_id;
            }
            if (covered) break;
        }
        if (!covered && internal.id != "root") {
            std::string id = "leafx" + internal.id;
            src.nodes.push_back({id, id, "leaf", internal.id});
            src.channel_binding.push_back(id);
        }
    }
    return TaxonomyTree::compile(std::move(src));
}

// Distribution on a 1/64 grid: every value and every partial sum is exactly
// representable in float and double, so engine and oracle see identical
// numbers and ties are genuine ties.
inline std::vector<double> random_dist64(std::mt19937& rng, int channels) {
    std::vector<int> units(channels, 0);
    for (int i = 0; i < 64; ++i) ++units[rng() % channels];
    std::vector<double> dist(channels);
    for (int c = 0; c < channels; ++c) dist[c] = units[c] / 64.0;
    return dist;
}

// Uniformly random probability map (double-normalized, cast to float).
inline ProbMap random_prob_map(std::mt19937& rng, int height, int width, int channels) {
    ProbMap map(height, width, channels);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    std::vector<double> raw(channels);
    for (size_t px = 0; px < map.pixel_count(); ++px) {
        double sum = 0.0;
        for (int c = 0; c < channels; ++c) {
            raw[c] = unit(rng);
            sum += raw[c];
        }
        for (int c = 0; c < channels; ++c)
            map.data[px * channels + c] = static_cast<float>(raw[c] / sum);
    }
    return map;
}

inline LabelMask random_mask(std::mt19937& rng, int height, int width, int channels,
                             double ignore_prob = 0.0) {
    LabelMask mask(height, width);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& v : mask.data) {
        if (ignore_prob > 0.0 && unit(rng) < ignore_prob)
            v = LabelMask::kIgnore;
        else
            v = static_cast<uint8_t>(rng() % channels);
    }
    return mask;
}

}  // namespace taxoseg::testing

#endif
