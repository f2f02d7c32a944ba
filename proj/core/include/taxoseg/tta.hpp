// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_TTA_HPP
#define TAXOSEG_TTA_HPP

#include <optional>
#include <string>
#include <vector>

#include "taxoseg/grid.hpp"

namespace taxoseg {

// The six grid symmetries with well-defined inverses on probability maps.
// Rotations are counter-clockwise.
enum class TtaTransform { identity, hflip, vflip, rot90, rot180, rot270 };

const char* to_string(TtaTransform transform);
std::optional<TtaTransform> tta_transform_from_string(const std::string& name);

TtaTransform inverse_of(TtaTransform transform);

// Applies a grid symmetry to a map (rot90/rot270 swap height and width).
ProbMap apply_transform(const ProbMap& map, TtaTransform transform);

// A probability map produced from a transformed copy of the input image,
// together with the transform that was applied to that image.
struct TtaView {
    ProbMap prob_map;
    TtaTransform transform = TtaTransform::identity;
};

struct TtaFusion {
    ProbMap fused;         // per-pixel, per-channel mean of the aligned views
    FloatGrid confidence;  // fused probability of the fused argmax channel
};

// Maps every view back through its inverse transform and averages. Views are
// fused in a fixed transform order, so permuting the input changes nothing.
TtaFusion fuse_tta(const std::vector<TtaView>& views);

}  // namespace taxoseg

#endif
