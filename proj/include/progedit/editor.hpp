// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "progedit/codec.hpp"
#include "progedit/gmm.hpp"
#include "progedit/grid.hpp"
#include "progedit/rng.hpp"
#include "progedit/sampler.hpp"
#include "progedit/schedule.hpp"
#include "progedit/threshold.hpp"

namespace progedit {

struct EditParams {
    NoiseSchedule schedule;  // schedule.steps is T
    int t_ds_max = 50;
    ThresholdKind threshold = ThresholdKind::linear;
    StepMode mode = StepMode::ancestral;
    std::uint64_t seed = 0;
    Conditioning conditioning;
    bool retain_steps = false;
    int retain_cap = 0;  // 0 keeps every executed step

    void validate() const;
};

// Independent substreams of one root seed:
//   init          one draw shared by every initial latent (source and exemplars
//                 are perturbed with the same eps at t_ds_max)
//   source-noise  per-step re-noising of the source
//   stepper       ancestral noise of the reverse steps
// Keeping them apart lets runs that differ only in how often the source is
// re-noised consume identical stepper noise.
struct EditStreams {
    RngStream init;
    RngStream source_noise;
    RngStream stepper;

    explicit EditStreams(std::uint64_t seed);
};

struct EditResult {
    Image output;
    LatentGrid latent;  // final level-0 latent before decoding
    EditParams params;
    int executed_steps = 0;
    bool degenerate = false;  // t_ds_max == 0: no reverse step ran

    // Retained per executed step, in execution order (t = t_ds_max .. 1).
    // masks[j] marks elements copied from the noised source at steps[j];
    // latents[j] is the composed latent before that step's denoise.
    std::vector<int> steps;
    std::vector<BinaryMask> per_step_masks;
    std::vector<LatentGrid> per_step_latents;
};

// Called before each denoise with (index, total executed steps).
using StepObserver = std::function<void(int, int)>;

BinaryMask mask_at(const EditMap& mu_d, double threshold);

// Progressive editing with a single exemplar. The loop starts at
// t_ds_max; at step t < t_ds_max the source is re-noised to t and copied
// wherever mu_d > threshold_value(kind, T - t, T).
EditResult progressive_edit(const Image& x1, const Image& x2, const EditMap& mu, const EditParams& params,
                            const GmmWorld& world, const EncoderConfig& cfg, const StepObserver& observer = {});

using Exemplar = std::pair<Image, EditMap>;

// Any number of exemplars by left-nesting the per-exemplar masks. Exemplar
// latents enter only at initialization; afterwards every nested layer takes
// the residue.
EditResult progressive_edit_multi(const Image& x1, const std::vector<Exemplar>& exemplars,
                                  const EditParams& params, const GmmWorld& world, const EncoderConfig& cfg,
                                  const StepObserver& observer = {});

// One single-exemplar pass per entry; each output becomes the next source.
// Pass 0 uses params.seed, later passes a seed mixed with the pass index.
EditResult iterative_edit(const Image& x1, const std::vector<Exemplar>& passes, const EditParams& params,
                          const GmmWorld& world, const EncoderConfig& cfg, const StepObserver& observer = {});

// Plain image-to-image: noise the encoded image to t_ds_max with the init
// stream and run the full reverse chain on the stepper stream.
EditResult img2img(const Image& x, const EditParams& params, const GmmWorld& world, const EncoderConfig& cfg);

// Binarize mu_d at 0.5, blend the noised latents once, denoise without any
// shifting mask.
EditResult naive_blend_baseline(const Image& x1, const Image& x2, const EditMap& mu, const EditParams& params,
                                const GmmWorld& world, const EncoderConfig& cfg,
                                const StepObserver& observer = {});

// Scales the source noise by (1 - mu_d) and re-copies it every step through
// the fixed mask mu_d > 0.5.
EditResult spatial_noise_baseline(const Image& x1, const Image& x2, const EditMap& mu,
                                  const EditParams& params, const GmmWorld& world, const EncoderConfig& cfg,
                                  const StepObserver& observer = {});

}  // namespace progedit
