// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_TILING_HPP
#define TAXOSEG_TILING_HPP

#include <utility>
#include <vector>

#include "taxoseg/grid.hpp"

namespace taxoseg {

struct TileOrigin {
    int row = 0;
    int col = 0;
    friend bool operator==(const TileOrigin&, const TileOrigin&) = default;
    friend auto operator<=>(const TileOrigin&, const TileOrigin&) = default;
};

// Tile geometry over an image: every pixel covered, every tile fully inside.
struct TilePlan {
    int tile_size = 0;
    int overlap = 0;
    std::vector<TileOrigin> origins;  // strictly increasing in scan order
};

// Origins advance at stride (tile_size - overlap) on each axis; the final
// origin is clamped to dim - tile_size so no tile leaves the image.
TilePlan plan_tiles(int height, int width, int tile_size, int overlap);

ProbMap extract_tile(const ProbMap& map, TileOrigin origin, int tile_size);

// Per-pixel arithmetic mean over every tile covering the pixel. Tiles are
// accumulated in scan order regardless of input order, so the result does
// not depend on tile arrival order.
ProbMap stitch_maps(const std::vector<std::pair<TileOrigin, ProbMap>>& tiles, int height, int width);

}  // namespace taxoseg

#endif
