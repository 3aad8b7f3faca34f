// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace progedit {

std::string_view to_string(StepMode mode) {
    return mode == StepMode::ancestral ? "ancestral" : "probability-flow";
}

StepMode parse_step_mode(std::string_view text) {
    if (text == "ancestral") {
        return StepMode::ancestral;
    }
    if (text == "probability-flow") {
        return StepMode::probability_flow;
    }
    fail(ErrorKind::invalid_argument, "unknown stepper mode '" + std::string(text) + "'");
}

LatentGrid apply_reverse_step(const LatentGrid& z, const ScoreField& score, int t,
                              const NoiseSchedule& sched, StepMode mode, RngStream& rng) {
    require(t >= 1 && t <= sched.steps, ErrorKind::out_of_range,
            "reverse step " + std::to_string(t) + " outside [1, " + std::to_string(sched.steps) + "]");
    require(score.shape() == z.shape(), ErrorKind::dimension_mismatch, "score does not match latent");
    const double s_hi = sigma(t, sched);
    const double s_lo = sigma(t - 1, sched);
    const double dvar = s_hi * s_hi - s_lo * s_lo;

    LatentGrid out = z;
    auto values = out.values();
    const auto sv = score.values();
    if (mode == StepMode::probability_flow) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            values[i] += 0.5 * dvar * sv[i];
        }
        return out;
    }
    const double noise_scale = std::sqrt(std::max(0.0, s_lo * s_lo * dvar / (s_hi * s_hi)));
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] += dvar * sv[i] + noise_scale * rng.gaussian();
    }
    return out;
}

LatentGrid denoise_step(const LatentGrid& z, int t, const NoiseSchedule& sched, const GmmWorld& world,
                        const Conditioning& cond, StepMode mode, RngStream& rng) {
    require(t >= 1 && t <= sched.steps, ErrorKind::out_of_range,
            "reverse step " + std::to_string(t) + " outside [1, " + std::to_string(sched.steps) + "]");
    return apply_reverse_step(z, gmm_score(z, sigma(t, sched), world, cond), t, sched, mode, rng);
}

LatentGrid full_reverse(const LatentGrid& z_noisy, int t_start, const NoiseSchedule& sched,
                        const GmmWorld& world, const Conditioning& cond, StepMode mode, RngStream& rng) {
    require(t_start >= 0 && t_start <= sched.steps, ErrorKind::out_of_range,
            "start step " + std::to_string(t_start) + " outside [0, " + std::to_string(sched.steps) + "]");
    LatentGrid z = z_noisy;
    for (int t = t_start; t >= 1; --t) {
        z = denoise_step(z, t, sched, world, cond, mode, rng);
    }
    return z;
}

BEstimate estimate_B(const GmmWorld& world, const NoiseSchedule& sched, int n_samples, const RngStream& rng,
                     const Conditioning& cond) {
    require(n_samples >= 1, ErrorKind::invalid_argument, "estimate_B needs at least one sample");
    BEstimate est;
    est.n_samples = n_samples;
    est.protocol = "trajectory-sup: max ||score||^2 at every visited (z_t, sigma(t)), t = T..0, over " +
                   std::to_string(n_samples) + " ancestral trajectories from N(0, sigma_max^2 I)";
    for (int i = 0; i < n_samples; ++i) {
        RngStream stream = rng.derive("trajectory-" + std::to_string(i));
        LatentGrid z(world.shape());
        for (double& v : z.values()) {
            v = sched.sigma_max * stream.gaussian();
        }
        for (int t = sched.steps; t >= 1; --t) {
            const ScoreField score = gmm_score(z, sigma(t, sched), world, cond);
            est.value = std::max(est.value, squared_norm(score));
            z = apply_reverse_step(z, score, t, sched, StepMode::ancestral, stream);
        }
        est.value = std::max(est.value, squared_norm(gmm_score(z, sigma(0, sched), world, cond)));
    }
    return est;
}

}  // namespace progedit
