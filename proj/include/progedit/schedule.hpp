// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "progedit/grid.hpp"
#include "progedit/rng.hpp"

namespace progedit {

// Geometric variance-exploding schedule over integer steps 0..steps.
// The forward SDE has zero drift and diffusion sqrt(d[sigma^2]/dt), so
// sigma(t) fully determines both the forward perturbation and the reverse
// stepper coefficients.
struct NoiseSchedule {
    int steps = 50;
    double sigma_min = 0.01;
    double sigma_max = 10.0;

    void validate() const;
};

double sigma(int t, const NoiseSchedule& sched);

// z_init + sigma(t) * eps with eps drawn fresh from rng; z_init is untouched.
LatentGrid add_noise(const LatentGrid& z_init, int t, const NoiseSchedule& sched, RngStream& rng);

// Same as add_noise but the perturbation at element i is scaled by
// scale[i % plane] (scale is broadcast over channels).
LatentGrid add_scaled_noise(const LatentGrid& z_init, int t, const NoiseSchedule& sched,
                            const EditMap& scale, RngStream& rng);

}  // namespace progedit
