// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_NPY_IO_HPP
#define TAXOSEG_NPY_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "taxoseg/grid.hpp"

namespace taxoseg {

// Array container format: magic \x93NUMPY, version 1.0, little-endian float32
// payload in C order. Writers emit the canonical header (sorted keys, space
// padding to 64-byte alignment, newline terminated) so equal arrays produce
// identical bytes. See docs/formats.md.

struct NpyArray {
    std::vector<int64_t> shape;
    std::vector<float> data;
};

NpyArray load_npy(std::string_view bytes);
std::string store_npy(const std::vector<int64_t>& shape, const std::vector<float>& data);

// Probability maps are stored 3-D as (height, width, channels).
ProbMap load_prob_map(std::string_view bytes);
std::string store_prob_map(const ProbMap& map);

// Confidence grids are stored 2-D as (height, width).
FloatGrid load_float_grid(std::string_view bytes);
std::string store_float_grid(const FloatGrid& grid);

}  // namespace taxoseg

#endif
