// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "progedit/gmm.hpp"
#include "progedit/rng.hpp"
#include "progedit/schedule.hpp"

namespace progedit {

enum class StepMode { ancestral, probability_flow };

std::string_view to_string(StepMode mode);
StepMode parse_step_mode(std::string_view text);

// One reverse step from noise level sigma(t) to sigma(t-1), 1 <= t <= T.
//   probability-flow: z + 0.5 (s_t^2 - s_{t-1}^2) score
//   ancestral:        z + (s_t^2 - s_{t-1}^2) score
//                       + sqrt(s_{t-1}^2 (s_t^2 - s_{t-1}^2) / s_t^2) eps
// The probability-flow step never touches rng.
LatentGrid denoise_step(const LatentGrid& z, int t, const NoiseSchedule& sched, const GmmWorld& world,
                        const Conditioning& cond, StepMode mode, RngStream& rng);

// Same update with a precomputed score at (z, sigma(t)).
LatentGrid apply_reverse_step(const LatentGrid& z, const ScoreField& score, int t,
                              const NoiseSchedule& sched, StepMode mode, RngStream& rng);

// Folds denoise_step from t_start down to 1 and returns the level-0 latent.
LatentGrid full_reverse(const LatentGrid& z_noisy, int t_start, const NoiseSchedule& sched,
                        const GmmWorld& world, const Conditioning& cond, StepMode mode, RngStream& rng);

struct BEstimate {
    double value = 0.0;
    int n_samples = 0;
    std::string protocol;
};

// Empirical sup of ||score||^2 along n_samples ancestral trajectories that
// start from prior noise N(0, sigma_max^2 I). Trajectory i uses the child
// stream "trajectory-<i>" of rng, so a larger n_samples extends the same
// nested plan.
BEstimate estimate_B(const GmmWorld& world, const NoiseSchedule& sched, int n_samples, const RngStream& rng,
                     const Conditioning& cond = {});

}  // namespace progedit
