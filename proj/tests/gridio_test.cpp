// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "support/fixtures.hpp"
#include "taxoseg/hash.hpp"
#include "taxoseg/npy_io.hpp"
#include "taxoseg/png_io.hpp"
#include "taxoseg/rescale.hpp"
#include "taxoseg/tiling.hpp"

using namespace taxoseg;
using taxoseg::testing::random_prob_map;

TEST_CASE("npy: uniform map loads with exact stored values") {
    ProbMap map(2, 2, 3, 1.0f / 3.0f);
    auto bytes = store_prob_map(map);
    auto loaded = load_prob_map(bytes);
    CHECK(loaded.height == 2);
    CHECK(loaded.width == 2);
    CHECK(loaded.channels == 3);
    for (float v : loaded.data) CHECK(v == 1.0f / 3.0f);
}

TEST_CASE("npy: store is canonical and round-trips byte-exact") {
    ProbMap map(1, 1, 2);
    map.data = {0.25f, 0.75f};
    const std::string bytes = store_prob_map(map);
    // Preamble is 64-byte aligned and newline terminated.
    CHECK(bytes.size() % 64 == 2 * sizeof(float) % 64);
    CHECK(bytes[6] == 1);
    auto loaded = load_prob_map(bytes);
    CHECK(loaded.data == std::vector<float>{0.25f, 0.75f});
    CHECK(store_prob_map(loaded) == bytes);

    ProbMap equal(1, 1, 2);
    equal.data = {0.25f, 0.75f};
    CHECK(store_prob_map(equal) == bytes);  // determinism
}

TEST_CASE("npy: 64x64x15 random map round-trips bit-exact") {
    std::mt19937 rng(7);
    auto map = random_prob_map(rng, 64, 64, 15);
    const std::string bytes = store_prob_map(map);
    auto loaded = load_prob_map(bytes);
    const std::string again = store_prob_map(loaded);
    CHECK(fnv1a64(bytes) == fnv1a64(again));
    CHECK(bytes == again);
}

TEST_CASE("npy: malformed inputs are rejected") {
    ProbMap map(2, 2, 3, 0.25f);
    std::string good = store_prob_map(map);

    SUBCASE("bad magic") {
        std::string bad = good;
        bad[0] = 'X';
        CHECK_THROWS_WITH_AS(load_prob_map(bad), doctest::Contains("magic"), IoError);
    }
    SUBCASE("bad version") {
        std::string bad = good;
        bad[6] = 2;
        CHECK_THROWS_WITH_AS(load_prob_map(bad), doctest::Contains("version"), IoError);
    }
    SUBCASE("2-D shape is a dimensionality error") {
        FloatGrid grid(2, 2, 0.5f);
        CHECK_THROWS_WITH_AS(load_prob_map(store_float_grid(grid)), doctest::Contains("3-D"), IoError);
    }
    SUBCASE("wrong dtype") {
        std::string bad = good;
        auto at = bad.find("<f4");
        bad.replace(at, 3, "<f8");
        CHECK_THROWS_WITH_AS(load_prob_map(bad), doctest::Contains("dtype"), IoError);
    }
    SUBCASE("truncated payload") {
        std::string bad = good.substr(0, good.size() - 5);
        CHECK_THROWS_WITH_AS(load_prob_map(bad), doctest::Contains("truncated"), IoError);
    }
}

TEST_CASE("png: all-ignore mask round-trips") {
    LabelMask mask(4, 5);  // defaults to the ignore value
    auto bytes = store_label_mask(mask);
    auto loaded = load_label_mask(bytes);
    CHECK(loaded.height == 4);
    CHECK(loaded.width == 5);
    for (uint8_t v : loaded.data) CHECK(v == LabelMask::kIgnore);
}

TEST_CASE("png: histogram survives the round trip") {
    LabelMask mask(3, 3);
    mask.data = {0, 0, 1, 1, 2, 2, 0, 1, 255};
    auto loaded = load_label_mask(store_label_mask(mask));
    CHECK(loaded.data == mask.data);
}

TEST_CASE("png: random masks round-trip byte-exact") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        auto mask = taxoseg::testing::random_mask(rng, 37, 53, 18, 0.1);
        const std::string bytes = store_label_mask(mask);
        auto loaded = load_label_mask(bytes);
        CHECK(loaded.data == mask.data);
        CHECK(store_label_mask(loaded) == bytes);
    }
}

TEST_CASE("png: rgb input is a multi-channel error") {
    // Smallest valid RGB PNG: 1x1, color type 2. Build via libpng is
    // overkill; hand-roll from a known-good fixture produced once.
    static const unsigned char rgb_png[] = {
        0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48,
        0x44, 0x52, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x02, 0x00, 0x00,
        0x00, 0x90, 0x77, 0x53, 0xde, 0x00, 0x00, 0x00, 0x0c, 0x49, 0x44, 0x41, 0x54, 0x78,
        0x9c, 0x62, 0xf8, 0xcf, 0xc0, 0x00, 0x00, 0x00, 0x04, 0x00, 0x01, 0x5c, 0xcd, 0xff,
        0x69, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};
    std::string bytes(reinterpret_cast<const char*>(rgb_png), sizeof rgb_png);
    CHECK_THROWS_WITH_AS(load_label_mask(bytes), doctest::Contains("multi-channel"), IoError);
}

TEST_CASE("png: garbage input is a decode failure") {
    CHECK_THROWS_AS(load_label_mask("definitely not a png"), IoError);
}

TEST_CASE("rescale: drone sensor ratio reproduces the expected width") {
    GsdSpec spec{0.5280, 0.7543};
    CHECK(scaled_dimension(8192, spec) == 5734);
    CHECK(scaled_dimension(5460, spec) == 3822);
}

TEST_CASE("rescale: equal gsd is the identity") {
    std::mt19937 rng(5);
    auto map = random_prob_map(rng, 9, 7, 4);
    GsdSpec spec{0.7543, 0.7543};
    auto out = rescale_prob_map(map, spec);
    CHECK(out.data == map.data);

    auto mask = taxoseg::testing::random_mask(rng, 9, 7, 4);
    CHECK(rescale_label_mask(mask, spec).data == mask.data);
}

TEST_CASE("rescale: constant map stays constant and sums stay normalized") {
    ProbMap map(10, 10, 2);
    for (size_t px = 0; px < map.pixel_count(); ++px) {
        map.data[px * 2] = 0.25f;
        map.data[px * 2 + 1] = 0.75f;
    }
    GsdSpec spec{1.0, 0.41};
    auto out = rescale_prob_map(map, spec);
    CHECK(out.height == 24);
    CHECK(out.width == 24);
    for (size_t px = 0; px < out.pixel_count(); ++px) {
        CHECK(out.data[px * 2] == 0.25f);
        CHECK(out.data[px * 2 + 1] == 0.75f);
    }

    std::mt19937 rng(11);
    auto noisy = random_prob_map(rng, 16, 12, 5);
    auto resampled = rescale_prob_map(noisy, GsdSpec{0.52, 0.7543});
    CHECK(resampled.check_distribution().empty());
}

TEST_CASE("rescale: zero output dimension is an error") {
    ProbMap map(4, 4, 2, 0.5f);
    CHECK_THROWS_WITH_AS(rescale_prob_map(map, GsdSpec{0.001, 1.0}), doctest::Contains("zero"), Error);
    CHECK_THROWS_AS(rescale_prob_map(map, GsdSpec{-1.0, 1.0}), Error);
}

TEST_CASE("plan_tiles: clamped final origin") {
    auto plan = plan_tiles(100, 100, 64, 16);
    std::set<int> rows, cols;
    for (auto o : plan.origins) {
        rows.insert(o.row);
        cols.insert(o.col);
    }
    CHECK(rows == std::set<int>{0, 36});
    CHECK(cols == std::set<int>{0, 36});
    CHECK(plan.origins.size() == 4);
}

TEST_CASE("plan_tiles: exact fit yields a single origin") {
    auto plan = plan_tiles(64, 64, 64, 0);
    REQUIRE(plan.origins.size() == 1);
    CHECK(plan.origins[0] == TileOrigin{0, 0});
}

TEST_CASE("plan_tiles: tile larger than image is an error") {
    CHECK_THROWS_AS(plan_tiles(64, 64, 65, 0), Error);
    CHECK_THROWS_AS(plan_tiles(64, 64, 64, 64), Error);
    CHECK_THROWS_AS(plan_tiles(64, 64, 64, -1), Error);
}

TEST_CASE("plan_tiles: full coverage over a parameter sweep") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int tile = 4 + static_cast<int>(rng() % 60);
        const int h = tile + static_cast<int>(rng() % 100);
        const int w = tile + static_cast<int>(rng() % 100);
        const int overlap = static_cast<int>(rng() % tile);
        auto plan = plan_tiles(h, w, tile, overlap);
        std::vector<int> covered(static_cast<size_t>(h) * w, 0);
        for (auto o : plan.origins) {
            CHECK(o.row + tile <= h);
            CHECK(o.col + tile <= w);
            for (int r = 0; r < tile; ++r)
                for (int c = 0; c < tile; ++c) ++covered[static_cast<size_t>(o.row + r) * w + o.col + c];
        }
        for (int v : covered) REQUIRE(v >= 1);
    }
}

TEST_CASE("stitch: overlapping constant tiles reproduce the constant") {
    ProbMap tile(4, 4, 2);
    for (size_t px = 0; px < tile.pixel_count(); ++px) {
        tile.data[px * 2] = 0.3f;
        tile.data[px * 2 + 1] = 0.7f;
    }
    std::vector<std::pair<TileOrigin, ProbMap>> tiles = {{{0, 0}, tile}, {{0, 2}, tile}, {{2, 0}, tile}, {{2, 2}, tile}};
    auto out = stitch_maps(tiles, 6, 6);
    for (size_t px = 0; px < out.pixel_count(); ++px) {
        CHECK(out.data[px * 2] == doctest::Approx(0.3).epsilon(1e-7));
        CHECK(out.data[px * 2 + 1] == doctest::Approx(0.7).epsilon(1e-7));
    }
}

TEST_CASE("stitch of extracted tiles reproduces the source map") {
    std::mt19937 rng(77);
    auto map = random_prob_map(rng, 50, 38, 6);
    auto plan = plan_tiles(map.height, map.width, 16, 5);
    std::vector<std::pair<TileOrigin, ProbMap>> tiles;
    for (auto o : plan.origins) tiles.emplace_back(o, extract_tile(map, o, plan.tile_size));
    // Shuffle to prove arrival order does not matter.
    std::shuffle(tiles.begin(), tiles.end(), rng);
    auto out = stitch_maps(tiles, map.height, map.width);
    REQUIRE(out.data.size() == map.data.size());
    for (size_t i = 0; i < out.data.size(); ++i)
        REQUIRE(std::abs(out.data[i] - map.data[i]) <= 1e-6f);
}

TEST_CASE("stitch: a gap is an uncovered-pixel error") {
    ProbMap tile(2, 2, 1, 0.5f);
    std::vector<std::pair<TileOrigin, ProbMap>> tiles = {{{0, 0}, tile}, {{2, 2}, tile}};
    CHECK_THROWS_WITH_AS(stitch_maps(tiles, 4, 4), doctest::Contains("not covered"), Error);
}

TEST_CASE("stitch: channel mismatch is rejected") {
    std::vector<std::pair<TileOrigin, ProbMap>> tiles = {{{0, 0}, ProbMap(2, 2, 1, 0.5f)},
                                                         {{0, 0}, ProbMap(2, 2, 2, 0.5f)}};
    CHECK_THROWS_WITH_AS(stitch_maps(tiles, 2, 2), doctest::Contains("channel"), Error);
}
