// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_BALANCE_HPP
#define TAXOSEG_BALANCE_HPP

#include <cstdint>
#include <vector>

#include "taxoseg/grid.hpp"

namespace taxoseg {

struct PixelCounts {
    std::vector<uint64_t> per_class;  // channel order
    uint64_t total = 0;               // non-ignore pixels counted

    // Disjoint mask subsets merge by addition.
    PixelCounts& operator+=(const PixelCounts& other);
};

enum class WeightNormalization { none, mean_one };

struct ClassWeights {
    std::vector<double> per_class;  // 0 for classes never observed
    double beta = 0.0;
    WeightNormalization normalization = WeightNormalization::none;
};

// Tallies class occurrences across masks; ignore pixels are excluded.
PixelCounts count_pixels(const std::vector<LabelMask>& masks, int num_classes);

// Class-balanced weights from the effective number of samples:
//   w_c = (1 - beta) / (1 - beta^{n_c})   for n_c >= 1.
// beta^n is computed as exp(n ln beta) with underflow clamped to zero, so
// pixel counts in the millions behave like the n -> infinity limit. Classes
// with zero count get weight zero and are excluded from normalization.
ClassWeights effective_weights(const PixelCounts& counts, double beta,
                               WeightNormalization normalization = WeightNormalization::mean_one);

}  // namespace taxoseg

#endif
