// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/fixtures.hpp"

#include <cmath>
#include <numbers>

namespace progedit::fixtures {

namespace {

constexpr int kPhases = 8;

double phase_at(int i) {
    return 2.0 * std::numbers::pi * i / kPhases;
}

}  // namespace

EncoderConfig encoder() {
    return {EncoderKind::block_average, 2};
}

Image texture_a(double phase) {
    Image img(Shape{1, kImageSize, kImageSize});
    for (int y = 0; y < kImageSize; ++y) {
        for (int x = 0; x < kImageSize; ++x) {
            img.at(0, y, x) = 0.3 + 0.06 * std::sin(2.0 * std::numbers::pi * 2.0 * y / kImageSize + phase);
        }
    }
    return img;
}

Image texture_b(double phase) {
    Image img(Shape{1, kImageSize, kImageSize});
    for (int y = 0; y < kImageSize; ++y) {
        for (int x = 0; x < kImageSize; ++x) {
            img.at(0, y, x) = 0.7 + 0.06 * std::sin(2.0 * std::numbers::pi * 2.0 * x / kImageSize + phase);
        }
    }
    return img;
}

EditMap ramp_map() {
    EditMap mu(kImageSize, kImageSize);
    const double lo = kImageSize / 3.0;
    const double hi = 2.0 * kImageSize / 3.0;
    for (int y = 0; y < kImageSize; ++y) {
        for (int x = 0; x < kImageSize; ++x) {
            const double c = x + 0.5;
            mu.set(y, x, c <= lo ? 0.0 : (c >= hi ? 1.0 : (c - lo) / (hi - lo)));
        }
    }
    return mu;
}

Image blend_images(const Image& a, const Image& b, const EditMap& mu) {
    require(a.shape() == b.shape() && mu.height() == a.height() && mu.width() == a.width(),
            ErrorKind::dimension_mismatch, "blend_images operands differ in shape");
    Image out(a.shape());
    const std::size_t plane = a.shape().plane();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double m = mu[i % plane];
        out[i] = m * a[i] + (1.0 - m) * b[i];
    }
    return out;
}

Image ladder_exemplar(double alpha) {
    const Image a = texture_a();
    const Image b = texture_b();
    Image out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = (1.0 - alpha) * a[i] + alpha * b[i];
    }
    return out;
}

std::vector<double> ladder_alphas() {
    return {0.15, 0.5, 1.0};
}

GmmWorld two_texture_world() {
    const EditMap mu = ramp_map();
    std::vector<Image> patches;
    for (int i = 0; i < kPhases; ++i) {
        patches.push_back(blend_images(texture_a(phase_at(i)), texture_b(phase_at(i)), mu));
    }
    GmmWorld world = kde_world_from_patches(patches, kBandwidth, encoder());
    world.description = "two-texture: horizontal stripes blending into vertical stripes along the ramp map";
    return world;
}

GmmWorld texture_a_world() {
    std::vector<Image> patches;
    for (int i = 0; i < kPhases; ++i) {
        patches.push_back(texture_a(phase_at(i)));
    }
    GmmWorld world = kde_world_from_patches(patches, kBandwidth, encoder());
    world.description = "texture-a: phase-shifted horizontal stripes";
    return world;
}

GmmWorld single_gaussian_world() {
    const LatentGrid mean = encode(texture_a(), encoder());
    GmmWorld world(mean.shape(), {{1.0, std::vector<double>(mean.values().begin(), mean.values().end()), 0.1}});
    world.description = "single-gaussian: texture-a mean, std 0.1";
    return world;
}

std::vector<NamedWorld> bundled_worlds() {
    return {
        {"two-texture", two_texture_world()},
        {"texture-a", texture_a_world()},
        {"single-gaussian", single_gaussian_world()},
    };
}

GmmWorld bundled_world(const std::string& name) {
    for (auto& w : bundled_worlds()) {
        if (w.name == name) {
            return std::move(w.world);
        }
    }
    fail(ErrorKind::input_missing, "no bundled world named '" + name + "'");
}

}  // namespace progedit::fixtures
