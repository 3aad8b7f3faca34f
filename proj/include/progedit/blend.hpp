// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "progedit/grid.hpp"

namespace progedit {

// Elementwise select a where the mask is set, b elsewhere. The mask is an
// H x W plane broadcast over channels.
template <typename T>
std::vector<T> select_by_mask(std::span<const T> a, std::span<const T> b, const BinaryMask& mask) {
    require(a.size() == b.size(), ErrorKind::dimension_mismatch, "blend operands differ in size");
    require(mask.size() > 0 && a.size() % mask.size() == 0, ErrorKind::dimension_mismatch,
            "mask plane does not tile the operands");
    const std::size_t plane = mask.size();
    std::vector<T> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = mask[i % plane] ? a[i] : b[i];
    }
    return out;
}

// Left-nested composition used by the multi-exemplar editor:
//   acc = head;  acc = acc (.) masks[j] + layers[j] (.) (1 - masks[j])
// Works for any element type so the partition can be traced symbolically.
template <typename T>
std::vector<T> compose_nested(std::span<const T> head, const std::vector<std::span<const T>>& layers,
                              const std::vector<BinaryMask>& masks) {
    require(layers.size() == masks.size(), ErrorKind::invalid_argument,
            "one mask per nested layer is required");
    std::vector<T> acc(head.begin(), head.end());
    for (std::size_t j = 0; j < layers.size(); ++j) {
        acc = select_by_mask<T>(acc, layers[j], masks[j]);
    }
    return acc;
}

LatentGrid surgical_blend(const LatentGrid& z1, const LatentGrid& z2, const BinaryMask& mask);

double latent_distance(const LatentGrid& a, const LatentGrid& b);

}  // namespace progedit
