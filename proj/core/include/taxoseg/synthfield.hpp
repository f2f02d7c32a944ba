// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_SYNTHFIELD_HPP
#define TAXOSEG_SYNTHFIELD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "taxoseg/grid.hpp"
#include "taxoseg/taxonomy.hpp"

namespace taxoseg {

// SplitMix64 (Steele, Lea & Flood 2014). Fixed, portable generator: golden
// files and property fixtures depend on this exact sequence, so it must not
// be swapped for an implementation-defined std:: engine.
struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        return mix(state);
    }

    // Uniform double in [0, 1), 53 mantissa bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

struct Blob {
    std::string leaf_id;
    int center_row = 0;
    int center_col = 0;
    double radius = 0.0;
};

struct NoiseSpec {
    double flip_prob = 0.0;              // chance a pixel's mass moves to a wrong class
    double dirichlet_sharpness = 1e6;    // concentration on the true class; -> one-hot as it grows
};

struct FieldSpec {
    uint64_t seed = 0;
    int height = 0;
    int width = 0;
    std::vector<Blob> blobs;  // painted in list order over a misc background
    NoiseSpec noise;
};

struct Field {
    ProbMap prob_map;
    LabelMask mask;
};

// Deterministic synthetic field: the mask paints the blobs over misc, and
// the probability map draws one per-pixel distribution concentrated on the
// mask class. Each pixel consumes its own SplitMix64 stream seeded from
// (seed, pixel index), so outputs are reproducible and flip decisions at a
// lower flip_prob are a subset of those at a higher one.
Field generate_field(const FieldSpec& spec, const TaxonomyTree& tree);

// Reference hierarchical decision for one distribution: recomputes every
// child's mass by literally summing leaves_under at each step and recurses
// into the maximum (ties to the child with the lowest first leaf channel).
// Deliberately naive and structurally independent of the engine path.
std::string oracle_hier_argmax(const std::vector<double>& dist, const TaxonomyTree& tree);

}  // namespace taxoseg

#endif
