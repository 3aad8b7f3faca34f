// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/codec.hpp"

#include <algorithm>
#include <string>

namespace progedit {

std::string_view to_string(EncoderKind kind) {
    return kind == EncoderKind::identity ? "identity" : "block-average";
}

EncoderKind parse_encoder_kind(std::string_view text) {
    if (text == "identity") {
        return EncoderKind::identity;
    }
    if (text == "block-average") {
        return EncoderKind::block_average;
    }
    fail(ErrorKind::invalid_argument, "unknown encoder kind '" + std::string(text) + "'");
}

namespace {

void check_factor(int factor) {
    require(factor == 1 || factor == 2 || factor == 4, ErrorKind::invalid_argument,
            "encoder factor must be 1, 2 or 4, got " + std::to_string(factor));
}

}  // namespace

Shape EncoderConfig::latent_shape(const Shape& image_shape) const {
    const int f = effective_factor();
    check_factor(f);
    require(image_shape.height % f == 0 && image_shape.width % f == 0, ErrorKind::dimension_mismatch,
            "image " + to_string(image_shape) + " is not divisible by factor " + std::to_string(f));
    return {image_shape.channels, image_shape.height / f, image_shape.width / f};
}

LatentGrid encode(const Image& img, const EncoderConfig& cfg) {
    const Shape out_shape = cfg.latent_shape(img.shape());
    const int f = cfg.effective_factor();
    if (f == 1) {
        return LatentGrid(out_shape, std::vector<double>(img.values().begin(), img.values().end()));
    }
    LatentGrid z(out_shape);
    const double inv = 1.0 / (f * f);
    for (int c = 0; c < out_shape.channels; ++c) {
        for (int y = 0; y < out_shape.height; ++y) {
            for (int x = 0; x < out_shape.width; ++x) {
                double sum = 0.0;
                double lo = img.at(c, y * f, x * f);
                double hi = lo;
                for (int dy = 0; dy < f; ++dy) {
                    for (int dx = 0; dx < f; ++dx) {
                        const double v = img.at(c, y * f + dy, x * f + dx);
                        sum += v;
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                    }
                }
                // constant blocks must survive exactly
                z.at(c, y, x) = std::clamp(sum * inv, lo, hi);
            }
        }
    }
    return z;
}

Image decode(const LatentGrid& z, const EncoderConfig& cfg) {
    const int f = cfg.effective_factor();
    check_factor(f);
    const Shape out_shape{z.channels(), z.height() * f, z.width() * f};
    if (f == 1) {
        return Image(out_shape, std::vector<double>(z.values().begin(), z.values().end()));
    }
    Image img(out_shape);
    for (int c = 0; c < out_shape.channels; ++c) {
        for (int y = 0; y < out_shape.height; ++y) {
            for (int x = 0; x < out_shape.width; ++x) {
                img.at(c, y, x) = z.at(c, y / f, x / f);
            }
        }
    }
    return img;
}

EditMap downsample_map(const EditMap& mu, int factor) {
    check_factor(factor);
    require(mu.height() % factor == 0 && mu.width() % factor == 0, ErrorKind::dimension_mismatch,
            "edit map " + std::to_string(mu.height()) + "x" + std::to_string(mu.width()) +
                " is not divisible by factor " + std::to_string(factor));
    if (factor == 1) {
        return mu;
    }
    const int h = mu.height() / factor;
    const int w = mu.width() / factor;
    std::vector<double> out(static_cast<std::size_t>(h) * w);
    const double inv = 1.0 / (factor * factor);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            double lo = 1.0;
            double hi = 0.0;
            for (int dy = 0; dy < factor; ++dy) {
                for (int dx = 0; dx < factor; ++dx) {
                    const double v = mu.at(y * factor + dy, x * factor + dx);
                    sum += v;
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
            // rounding can push a block of equal values one ulp outside its range
            out[static_cast<std::size_t>(y) * w + x] = std::clamp(sum * inv, lo, hi);
        }
    }
    return EditMap(h, w, std::move(out));
}

}  // namespace progedit
