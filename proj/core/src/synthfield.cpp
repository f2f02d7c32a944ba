// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "taxoseg/synthfield.hpp"

#include <cmath>

#include "taxoseg/error.hpp"

namespace taxoseg {
namespace {

// Exponential(1) via inversion; u in [0,1) keeps the log argument positive.
inline double exponential(SplitMix64& rng) { return -std::log1p(-rng.next_unit()); }

}  // namespace

Field generate_field(const FieldSpec& spec, const TaxonomyTree& tree) {
    if (spec.height <= 0 || spec.width <= 0) throw Error("generate_field: empty field");
    if (!(spec.noise.flip_prob >= 0.0 && spec.noise.flip_prob < 1.0))
        throw Error("generate_field: flip_prob must lie in [0,1)");
    if (!(spec.noise.dirichlet_sharpness > 0.0))
        throw Error("generate_field: dirichlet_sharpness must be positive");
    if (!tree.misc_channel()) throw Error("generate_field: taxonomy declares no misc leaf");

    const int channels = tree.channel_count();
    if (channels < 2) throw Error("generate_field: need at least two classes");

    Field field;
    field.mask = LabelMask(spec.height, spec.width, static_cast<uint8_t>(*tree.misc_channel()));

    for (const auto& blob : spec.blobs) {
        const int channel = tree.channel_of_leaf(blob.leaf_id);
        if (channel < 0) throw Error("generate_field: blob leaf '" + blob.leaf_id + "' not in taxonomy");
        if (blob.radius <= 0.0) throw Error("generate_field: blob radius must be positive");
        if (blob.center_row - blob.radius < 0 || blob.center_row + blob.radius > spec.height - 1 ||
            blob.center_col - blob.radius < 0 || blob.center_col + blob.radius > spec.width - 1)
            throw Error("generate_field: blob '" + blob.leaf_id + "' leaves the image");
        const double r2 = blob.radius * blob.radius;
        for (int r = 0; r < spec.height; ++r) {
            for (int c = 0; c < spec.width; ++c) {
                const double dr = r - blob.center_row;
                const double dc = c - blob.center_col;
                if (dr * dr + dc * dc <= r2) field.mask.at(r, c) = static_cast<uint8_t>(channel);
            }
        }
    }

    field.prob_map = ProbMap(spec.height, spec.width, channels);
    const size_t pixels = field.mask.pixel_count();
    std::vector<double> raw(channels);

    for (size_t px = 0; px < pixels; ++px) {
        // One private stream per pixel; draw order is part of the contract:
        // flip coin, wrong-class pick, then one exponential per channel.
        SplitMix64 rng(SplitMix64::mix(spec.seed) ^ SplitMix64::mix(px + 1));
        const double flip_draw = rng.next_unit();
        const uint64_t wrong_draw = rng.next();

        const int true_channel = field.mask.data[px];
        double sum = 0.0;
        for (int c = 0; c < channels; ++c) {
            double g = exponential(rng);
            if (c == true_channel) g = spec.noise.dirichlet_sharpness * (1.0 + g);
            raw[c] = g;
            sum += g;
        }

        if (flip_draw < spec.noise.flip_prob) {
            int wrong = static_cast<int>(wrong_draw % static_cast<uint64_t>(channels - 1));
            if (wrong >= true_channel) ++wrong;
            std::swap(raw[true_channel], raw[wrong]);
        }

        float* out = &field.prob_map.data[px * channels];
        for (int c = 0; c < channels; ++c) out[c] = static_cast<float>(raw[c] / sum);
    }
    return field;
}

std::string oracle_hier_argmax(const std::vector<double>& dist, const TaxonomyTree& tree) {
    if (static_cast<int>(dist.size()) != tree.channel_count())
        throw Error("oracle_hier_argmax: distribution length does not match taxonomy channels");
    double total = 0.0;
    for (double d : dist) total += d;
    if (std::abs(total - 1.0) > 1e-6)
        throw Error("oracle_hier_argmax: distribution does not sum to 1");

    std::string current = tree.node(tree.root_index()).id;
    while (true) {
        const int index = tree.index_of(current);
        if (tree.is_leaf(index)) return current;

        std::string best;
        double best_mass = -1.0;
        int best_first = -1;
        for (int child : tree.children_of(index)) {
            const std::string& child_id = tree.node(child).id;
            double mass = 0.0;
            int first = tree.channel_count();
            for (const auto& leaf : tree.leaves_under(child_id)) {
                const int channel = tree.channel_of_leaf(leaf);
                mass += dist[channel];
                if (channel < first) first = channel;
            }
            if (mass > best_mass || (mass == best_mass && first < best_first)) {
                best = child_id;
                best_mass = mass;
                best_first = first;
            }
        }
        current = best;
    }
}

}  // namespace taxoseg
