// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/blend.hpp"

#include <cmath>

namespace progedit {

LatentGrid surgical_blend(const LatentGrid& z1, const LatentGrid& z2, const BinaryMask& mask) {
    require(z1.shape() == z2.shape(), ErrorKind::dimension_mismatch,
            "cannot blend " + to_string(z1.shape()) + " with " + to_string(z2.shape()));
    require(mask.height() == z1.height() && mask.width() == z1.width(), ErrorKind::dimension_mismatch,
            "mask does not match latent " + to_string(z1.shape()));
    return LatentGrid(z1.shape(), select_by_mask<double>(z1.values(), z2.values(), mask));
}

double latent_distance(const LatentGrid& a, const LatentGrid& b) {
    require(a.shape() == b.shape(), ErrorKind::dimension_mismatch,
            "cannot compare " + to_string(a.shape()) + " with " + to_string(b.shape()));
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace progedit
