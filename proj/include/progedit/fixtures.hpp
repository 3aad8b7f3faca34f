// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "progedit/codec.hpp"
#include "progedit/gmm.hpp"
#include "progedit/grid.hpp"

namespace progedit::fixtures {

// Bundled desk-scale fixtures: 64 x 64 grayscale images encoded by 2 x 2
// block averaging into 1 x 32 x 32 latents.
inline constexpr int kImageSize = 64;
inline constexpr double kBandwidth = 0.05;

EncoderConfig encoder();

// "Forest": dark horizontal bands; "beach": bright vertical bands.
Image texture_a(double phase = 0.0);
Image texture_b(double phase = 0.0);

// 0 on the left third, linear ramp across the middle third, 1 on the right.
EditMap ramp_map();

// Pixelwise mu * a + (1 - mu) * b.
Image blend_images(const Image& a, const Image& b, const EditMap& mu);

// Texture-a source shifted toward texture-b by fraction alpha.
Image ladder_exemplar(double alpha);
std::vector<double> ladder_alphas();

// Mixture whose components are seamless beach-to-forest transitions laid
// out along ramp_map(), at several texture phases.
GmmWorld two_texture_world();

// Mixture of phase-shifted texture-a images.
GmmWorld texture_a_world();

// One isotropic Gaussian centred on texture_a(), std 0.1.
GmmWorld single_gaussian_world();

struct NamedWorld {
    std::string name;
    GmmWorld world;
};

std::vector<NamedWorld> bundled_worlds();
GmmWorld bundled_world(const std::string& name);

}  // namespace progedit::fixtures
