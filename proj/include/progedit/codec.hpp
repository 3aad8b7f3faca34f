// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "progedit/grid.hpp"

namespace progedit {

enum class EncoderKind { identity, block_average };

std::string_view to_string(EncoderKind kind);
EncoderKind parse_encoder_kind(std::string_view text);

// Toy latent codec. Block-average pooling keeps every latent element at the
// same relative position as the pixels it summarizes.
struct EncoderConfig {
    EncoderKind kind = EncoderKind::identity;
    int factor = 1;  // 1, 2 or 4; ignored by identity

    int effective_factor() const { return kind == EncoderKind::identity ? 1 : factor; }
    Shape latent_shape(const Shape& image_shape) const;
};

LatentGrid encode(const Image& img, const EncoderConfig& cfg);

// Nearest-neighbour upsampling; no clamping happens here.
Image decode(const LatentGrid& z, const EncoderConfig& cfg);

// f x f block mean of the edit map.
EditMap downsample_map(const EditMap& mu, int factor);

}  // namespace progedit
