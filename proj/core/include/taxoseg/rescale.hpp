// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_RESCALE_HPP
#define TAXOSEG_RESCALE_HPP

#include "taxoseg/grid.hpp"

namespace taxoseg {

// Ground sample distances in mm per pixel. The default target (0.7543) is
// the 35 mm drone sensor resolution every input is normalized to.
struct GsdSpec {
    double source_gsd = 0.0;
    double target_gsd = kDefaultTargetGsd;

    static constexpr double kDefaultTargetGsd = 0.7543;

    bool valid() const { return source_gsd > 0.0 && target_gsd > 0.0; }
    bool identity() const { return source_gsd == target_gsd; }
};

// Output dimension after scale normalization: round(dim * source / target).
int scaled_dimension(int dim, const GsdSpec& spec);

// Bilinear resampling, pixel-center aligned. Per-pixel channel sums are
// preserved (interpolation is linear, so the sum field interpolates too).
// Equal source and target GSD returns the input unchanged.
ProbMap rescale_prob_map(const ProbMap& map, const GsdSpec& spec);

// Nearest-neighbor resampling; never invents class values.
LabelMask rescale_label_mask(const LabelMask& mask, const GsdSpec& spec);

}  // namespace taxoseg

#endif
