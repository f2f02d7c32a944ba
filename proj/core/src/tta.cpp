// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "taxoseg/tta.hpp"

#include <algorithm>
#include <cstring>

#include "taxoseg/error.hpp"

namespace taxoseg {

const char* to_string(TtaTransform transform) {
    switch (transform) {
        case TtaTransform::identity: return "identity";
        case TtaTransform::hflip: return "hflip";
        case TtaTransform::vflip: return "vflip";
        case TtaTransform::rot90: return "rot90";
        case TtaTransform::rot180: return "rot180";
        case TtaTransform::rot270: return "rot270";
    }
    return "?";
}

std::optional<TtaTransform> tta_transform_from_string(const std::string& name) {
    for (TtaTransform t : {TtaTransform::identity, TtaTransform::hflip, TtaTransform::vflip,
                           TtaTransform::rot90, TtaTransform::rot180, TtaTransform::rot270})
        if (name == to_string(t)) return t;
    return std::nullopt;
}

TtaTransform inverse_of(TtaTransform transform) {
    switch (transform) {
        case TtaTransform::rot90: return TtaTransform::rot270;
        case TtaTransform::rot270: return TtaTransform::rot90;
        default: return transform;  // the rest are involutions
    }
}

ProbMap apply_transform(const ProbMap& map, TtaTransform transform) {
    const int h = map.height, w = map.width, c = map.channels;
    const bool swaps = transform == TtaTransform::rot90 || transform == TtaTransform::rot270;
    ProbMap out(swaps ? w : h, swaps ? h : w, c);

    auto copy_pixel = [&](int out_r, int out_c, int in_r, int in_c) {
        std::memcpy(&out.data[out.index(out_r, out_c, 0)], &map.data[map.index(in_r, in_c, 0)],
                    sizeof(float) * c);
    };

    switch (transform) {
        case TtaTransform::identity:
            out.data = map.data;
            break;
        case TtaTransform::hflip:
            for (int r = 0; r < h; ++r)
                for (int col = 0; col < w; ++col) copy_pixel(r, col, r, w - 1 - col);
            break;
        case TtaTransform::vflip:
            for (int r = 0; r < h; ++r)
                for (int col = 0; col < w; ++col) copy_pixel(r, col, h - 1 - r, col);
            break;
        case TtaTransform::rot90:  // counter-clockwise quarter turn
            for (int r = 0; r < w; ++r)
                for (int col = 0; col < h; ++col) copy_pixel(r, col, col, w - 1 - r);
            break;
        case TtaTransform::rot180:
            for (int r = 0; r < h; ++r)
                for (int col = 0; col < w; ++col) copy_pixel(r, col, h - 1 - r, w - 1 - col);
            break;
        case TtaTransform::rot270:
            for (int r = 0; r < w; ++r)
                for (int col = 0; col < h; ++col) copy_pixel(r, col, h - 1 - col, r);
            break;
    }
    return out;
}

TtaFusion fuse_tta(const std::vector<TtaView>& views) {
    if (views.empty()) throw Error("fuse_tta: empty view list");

    // Align all views to the original geometry, then fuse in transform order
    // so the floating-point reduction ignores input permutation.
    std::vector<const TtaView*> ordered;
    ordered.reserve(views.size());
    for (const auto& v : views) ordered.push_back(&v);
    std::stable_sort(ordered.begin(), ordered.end(), [](const TtaView* a, const TtaView* b) {
        return static_cast<int>(a->transform) < static_cast<int>(b->transform);
    });

    std::vector<ProbMap> aligned;
    aligned.reserve(ordered.size());
    for (const TtaView* v : ordered) aligned.push_back(apply_transform(v->prob_map, inverse_of(v->transform)));

    const ProbMap& first = aligned.front();
    for (const auto& m : aligned)
        if (!m.same_shape(first))
            throw Error("fuse_tta: view dimensions disagree after inverse transform (" +
                        std::to_string(m.height) + "x" + std::to_string(m.width) + "x" +
                        std::to_string(m.channels) + " vs " + std::to_string(first.height) + "x" +
                        std::to_string(first.width) + "x" + std::to_string(first.channels) + ")");

    TtaFusion fusion;
    fusion.fused = ProbMap(first.height, first.width, first.channels);
    fusion.confidence = FloatGrid(first.height, first.width);

    const size_t values = fusion.fused.data.size();
    std::vector<double> acc(values, 0.0);
    for (const auto& m : aligned)
        for (size_t i = 0; i < values; ++i) acc[i] += m.data[i];

    const double inv = 1.0 / static_cast<double>(aligned.size());
    for (size_t i = 0; i < values; ++i) fusion.fused.data[i] = static_cast<float>(acc[i] * inv);

    const int channels = first.channels;
    const size_t pixels = first.pixel_count();
    for (size_t px = 0; px < pixels; ++px) {
        const float* p = &fusion.fused.data[px * channels];
        int best = 0;
        for (int ch = 1; ch < channels; ++ch)
            if (p[ch] > p[best]) best = ch;
        fusion.confidence.data[px] = p[best];
    }
    return fusion;
}

}  // namespace taxoseg
