// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TAXOSEG_GRID_HPP
#define TAXOSEG_GRID_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "taxoseg/error.hpp"

namespace taxoseg {

// Per-pixel class probability distributions, row-major, channel innermost.
// Values come from an upstream softmax: non-negative, and each pixel's
// channel sum lies in [1 - kSumTolerance, 1 + kSumTolerance].
struct ProbMap {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<float> data;

    static constexpr double kSumTolerance = 1e-4;

    ProbMap() = default;
    ProbMap(int h, int w, int c, float fill = 0.0f)
        : height(h), width(w), channels(c),
          data(static_cast<size_t>(h) * w * c, fill) {}

    size_t index(int row, int col, int channel) const {
        return (static_cast<size_t>(row) * width + col) * channels + channel;
    }
    float at(int row, int col, int channel) const { return data[index(row, col, channel)]; }
    float& at(int row, int col, int channel) { return data[index(row, col, channel)]; }

    size_t pixel_count() const { return static_cast<size_t>(height) * width; }
    bool same_shape(const ProbMap& other) const {
        return height == other.height && width == other.width && channels == other.channels;
    }

    // Checks the softmax invariants; returns an explanation for the first
    // offending pixel, or empty string if the map is well formed.
    std::string check_distribution() const {
        for (int r = 0; r < height; ++r) {
            for (int c = 0; c < width; ++c) {
                double sum = 0.0;
                for (int ch = 0; ch < channels; ++ch) {
                    float v = at(r, c, ch);
                    if (v < 0.0f || v > 1.0f) {
                        return "value " + std::to_string(v) + " out of [0,1] at pixel (" +
                               std::to_string(r) + "," + std::to_string(c) + ")";
                    }
                    sum += v;
                }
                if (sum < 1.0 - kSumTolerance || sum > 1.0 + kSumTolerance) {
                    return "channel sum " + std::to_string(sum) + " outside softmax tolerance at pixel (" +
                           std::to_string(r) + "," + std::to_string(c) + ")";
                }
            }
        }
        return {};
    }
};

// Ground-truth (or predicted) class-index raster. 255 marks ignored pixels.
struct LabelMask {
    static constexpr uint8_t kIgnore = 255;

    int height = 0;
    int width = 0;
    std::vector<uint8_t> data;

    LabelMask() = default;
    LabelMask(int h, int w, uint8_t fill = kIgnore)
        : height(h), width(w), data(static_cast<size_t>(h) * w, fill) {}

    size_t index(int row, int col) const { return static_cast<size_t>(row) * width + col; }
    uint8_t at(int row, int col) const { return data[index(row, col)]; }
    uint8_t& at(int row, int col) { return data[index(row, col)]; }

    size_t pixel_count() const { return data.size(); }
    bool same_shape(const LabelMask& other) const {
        return height == other.height && width == other.width;
    }
};

// Single-channel float grid (confidence maps and similar).
struct FloatGrid {
    int height = 0;
    int width = 0;
    std::vector<float> data;

    FloatGrid() = default;
    FloatGrid(int h, int w, float fill = 0.0f)
        : height(h), width(w), data(static_cast<size_t>(h) * w, fill) {}

    float at(int row, int col) const { return data[static_cast<size_t>(row) * width + col]; }
    float& at(int row, int col) { return data[static_cast<size_t>(row) * width + col]; }
};

}  // namespace taxoseg

#endif
