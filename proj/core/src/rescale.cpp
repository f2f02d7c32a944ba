// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "taxoseg/rescale.hpp"

#include <algorithm>
#include <cmath>

#include "taxoseg/error.hpp"

namespace taxoseg {
namespace {

void require_valid(const GsdSpec& spec) {
    if (!spec.valid()) throw Error("rescale: GSD values must be strictly positive");
}

// Source coordinate of a destination pixel center (align-corners = false).
inline double source_coord(int dst, double scale) { return (dst + 0.5) * scale - 0.5; }

inline float lerp(float a, float b, double t) { return static_cast<float>(a + t * (b - a)); }

}  // namespace

int scaled_dimension(int dim, const GsdSpec& spec) {
    require_valid(spec);
    return static_cast<int>(std::llround(dim * spec.source_gsd / spec.target_gsd));
}

ProbMap rescale_prob_map(const ProbMap& map, const GsdSpec& spec) {
    require_valid(spec);
    if (spec.identity()) return map;

    int out_h = scaled_dimension(map.height, spec);
    int out_w = scaled_dimension(map.width, spec);
    if (out_h <= 0 || out_w <= 0) throw Error("rescale: output dimension is zero");

    ProbMap out(out_h, out_w, map.channels);
    const double sy = static_cast<double>(map.height) / out_h;
    const double sx = static_cast<double>(map.width) / out_w;

    for (int r = 0; r < out_h; ++r) {
        double fy = std::clamp(source_coord(r, sy), 0.0, static_cast<double>(map.height - 1));
        int y0 = static_cast<int>(fy);
        int y1 = std::min(y0 + 1, map.height - 1);
        double ty = fy - y0;
        for (int c = 0; c < out_w; ++c) {
            double fx = std::clamp(source_coord(c, sx), 0.0, static_cast<double>(map.width - 1));
            int x0 = static_cast<int>(fx);
            int x1 = std::min(x0 + 1, map.width - 1);
            double tx = fx - x0;
            for (int ch = 0; ch < map.channels; ++ch) {
                float top = lerp(map.at(y0, x0, ch), map.at(y0, x1, ch), tx);
                float bottom = lerp(map.at(y1, x0, ch), map.at(y1, x1, ch), tx);
                out.at(r, c, ch) = lerp(top, bottom, ty);
            }
        }
    }
    return out;
}

LabelMask rescale_label_mask(const LabelMask& mask, const GsdSpec& spec) {
    require_valid(spec);
    if (spec.identity()) return mask;

    int out_h = scaled_dimension(mask.height, spec);
    int out_w = scaled_dimension(mask.width, spec);
    if (out_h <= 0 || out_w <= 0) throw Error("rescale: output dimension is zero");

    LabelMask out(out_h, out_w);
    const double sy = static_cast<double>(mask.height) / out_h;
    const double sx = static_cast<double>(mask.width) / out_w;
    for (int r = 0; r < out_h; ++r) {
        int y = std::clamp(static_cast<int>(std::floor((r + 0.5) * sy)), 0, mask.height - 1);
        for (int c = 0; c < out_w; ++c) {
            int x = std::clamp(static_cast<int>(std::floor((c + 0.5) * sx)), 0, mask.width - 1);
            out.at(r, c) = mask.at(y, x);
        }
    }
    return out;
}

}  // namespace taxoseg
