// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/schedule.hpp"

#include <cmath>
#include <string>

namespace progedit {

void NoiseSchedule::validate() const {
    require(steps >= 1, ErrorKind::invalid_argument, "schedule needs at least one step");
    // equal endpoints give a constant schedule whose reverse steps are no-ops
    require(sigma_min > 0.0 && sigma_min <= sigma_max && std::isfinite(sigma_max),
            ErrorKind::invalid_argument, "schedule requires 0 < sigma_min <= sigma_max");
}

double sigma(int t, const NoiseSchedule& sched) {
    require(t >= 0 && t <= sched.steps, ErrorKind::out_of_range,
            "step " + std::to_string(t) + " outside [0, " + std::to_string(sched.steps) + "]");
    if (t == 0) {
        return sched.sigma_min;
    }
    if (t == sched.steps) {
        return sched.sigma_max;
    }
    const double frac = static_cast<double>(t) / sched.steps;
    return sched.sigma_min * std::pow(sched.sigma_max / sched.sigma_min, frac);
}

LatentGrid add_noise(const LatentGrid& z_init, int t, const NoiseSchedule& sched, RngStream& rng) {
    const double s = sigma(t, sched);
    LatentGrid out = z_init;
    for (double& v : out.values()) {
        v += s * rng.gaussian();
    }
    return out;
}

LatentGrid add_scaled_noise(const LatentGrid& z_init, int t, const NoiseSchedule& sched,
                            const EditMap& scale, RngStream& rng) {
    require(scale.height() == z_init.height() && scale.width() == z_init.width(),
            ErrorKind::dimension_mismatch, "noise scale map does not match latent");
    const double s = sigma(t, sched);
    const std::size_t plane = z_init.shape().plane();
    LatentGrid out = z_init;
    auto values = out.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] += s * scale[i % plane] * rng.gaussian();
    }
    return out;
}

}  // namespace progedit
