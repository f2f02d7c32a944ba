// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "taxoseg/tiling.hpp"

#include <algorithm>
#include <numeric>

#include "taxoseg/error.hpp"

namespace taxoseg {
namespace {

std::vector<int> axis_origins(int dim, int tile_size, int overlap) {
    std::vector<int> origins;
    const int stride = tile_size - overlap;
    for (int pos = 0;; pos += stride) {
        if (pos + tile_size >= dim) {
            origins.push_back(dim - tile_size);
            break;
        }
        origins.push_back(pos);
    }
    origins.erase(std::unique(origins.begin(), origins.end()), origins.end());
    return origins;
}

}  // namespace

TilePlan plan_tiles(int height, int width, int tile_size, int overlap) {
    if (tile_size <= 0) throw Error("plan_tiles: tile_size must be positive");
    if (overlap < 0 || overlap >= tile_size) throw Error("plan_tiles: overlap must satisfy 0 <= overlap < tile_size");
    if (tile_size > height || tile_size > width)
        throw Error("plan_tiles: tile " + std::to_string(tile_size) + " larger than image " +
                    std::to_string(height) + "x" + std::to_string(width));

    TilePlan plan;
    plan.tile_size = tile_size;
    plan.overlap = overlap;
    auto rows = axis_origins(height, tile_size, overlap);
    auto cols = axis_origins(width, tile_size, overlap);
    plan.origins.reserve(rows.size() * cols.size());
    for (int r : rows)
        for (int c : cols) plan.origins.push_back({r, c});
    return plan;
}

ProbMap extract_tile(const ProbMap& map, TileOrigin origin, int tile_size) {
    if (origin.row < 0 || origin.col < 0 || origin.row + tile_size > map.height ||
        origin.col + tile_size > map.width)
        throw Error("extract_tile: tile leaves the image");
    ProbMap tile(tile_size, tile_size, map.channels);
    for (int r = 0; r < tile_size; ++r) {
        const float* src = &map.data[map.index(origin.row + r, origin.col, 0)];
        float* dst = &tile.data[tile.index(r, 0, 0)];
        std::copy(src, src + static_cast<size_t>(tile_size) * map.channels, dst);
    }
    return tile;
}

ProbMap stitch_maps(const std::vector<std::pair<TileOrigin, ProbMap>>& tiles, int height, int width) {
    if (tiles.empty()) throw Error("stitch_maps: no tiles");
    const int channels = tiles.front().second.channels;
    for (const auto& [origin, tile] : tiles) {
        if (tile.channels != channels) throw Error("stitch_maps: channel mismatch between tiles");
        if (origin.row < 0 || origin.col < 0 || origin.row + tile.height > height ||
            origin.col + tile.width > width)
            throw Error("stitch_maps: tile leaves the image");
    }

    // Scan-order accumulation makes the reduction independent of input order.
    std::vector<size_t> order(tiles.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&tiles](size_t a, size_t b) {
        return tiles[a].first < tiles[b].first;
    });

    std::vector<double> acc(static_cast<size_t>(height) * width * channels, 0.0);
    std::vector<uint32_t> cover(static_cast<size_t>(height) * width, 0);

    for (size_t idx : order) {
        const auto& [origin, tile] = tiles[idx];
        for (int r = 0; r < tile.height; ++r) {
            for (int c = 0; c < tile.width; ++c) {
                size_t px = static_cast<size_t>(origin.row + r) * width + (origin.col + c);
                ++cover[px];
                const float* src = &tile.data[tile.index(r, c, 0)];
                double* dst = &acc[px * channels];
                for (int ch = 0; ch < channels; ++ch) dst[ch] += src[ch];
            }
        }
    }

    ProbMap out(height, width, channels);
    for (size_t px = 0; px < cover.size(); ++px) {
        if (cover[px] == 0)
            throw Error("stitch_maps: pixel " + std::to_string(px / width) + "," +
                        std::to_string(px % width) + " not covered by any tile");
        const double inv = 1.0 / cover[px];
        for (int ch = 0; ch < channels; ++ch)
            out.data[px * channels + ch] = static_cast<float>(acc[px * channels + ch] * inv);
    }
    return out;
}

}  // namespace taxoseg
