// Copyright 2026 the taxoseg authors
// SPDX-License-Identifier: Apache-2.0

#include "taxoseg/balance.hpp"

#include <cmath>

#include "taxoseg/error.hpp"

namespace taxoseg {

PixelCounts& PixelCounts::operator+=(const PixelCounts& other) {
    if (per_class.size() < other.per_class.size()) per_class.resize(other.per_class.size(), 0);
    for (size_t i = 0; i < other.per_class.size(); ++i) per_class[i] += other.per_class[i];
    total += other.total;
    return *this;
}

PixelCounts count_pixels(const std::vector<LabelMask>& masks, int num_classes) {
    if (num_classes <= 0) throw Error("count_pixels: num_classes must be positive");
    PixelCounts counts;
    counts.per_class.assign(num_classes, 0);
    for (size_t m = 0; m < masks.size(); ++m) {
        for (uint8_t v : masks[m].data) {
            if (v == LabelMask::kIgnore) continue;
            if (v >= num_classes)
                throw Error("count_pixels: mask " + std::to_string(m) + " contains class " +
                            std::to_string(v) + " >= num_classes " + std::to_string(num_classes));
            ++counts.per_class[v];
            ++counts.total;
        }
    }
    return counts;
}

ClassWeights effective_weights(const PixelCounts& counts, double beta, WeightNormalization normalization) {
    if (!(beta >= 0.0 && beta < 1.0)) throw Error("effective_weights: beta must lie in [0,1)");

    ClassWeights weights;
    weights.beta = beta;
    weights.normalization = normalization;
    weights.per_class.assign(counts.per_class.size(), 0.0);

    const double one_minus_beta = 1.0 - beta;
    for (size_t c = 0; c < counts.per_class.size(); ++c) {
        const uint64_t n = counts.per_class[c];
        if (n == 0) continue;  // absent classes contribute no loss
        double beta_pow_n;
        if (beta == 0.0) {
            beta_pow_n = 0.0;
        } else if (n == 1) {
            beta_pow_n = beta;  // keeps w(n=1) == 1 exact
        } else {
            const double exponent = static_cast<double>(n) * std::log(beta);
            beta_pow_n = exponent < -745.0 ? 0.0 : std::exp(exponent);
        }
        weights.per_class[c] = one_minus_beta / (1.0 - beta_pow_n);
    }

    if (normalization == WeightNormalization::mean_one) {
        double sum = 0.0;
        size_t nonzero = 0;
        for (double w : weights.per_class) {
            if (w > 0.0) {
                sum += w;
                ++nonzero;
            }
        }
        if (nonzero > 0) {
            const double mean = sum / static_cast<double>(nonzero);
            for (double& w : weights.per_class) w /= mean;
        }
    }
    return weights;
}

}  // namespace taxoseg
