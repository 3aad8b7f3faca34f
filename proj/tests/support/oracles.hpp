// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations for the tests. Nothing here calls
// into the code under test except for data accessors.
#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "progedit/codec.hpp"
#include "progedit/gmm.hpp"
#include "progedit/grid.hpp"
#include "progedit/rng.hpp"
#include "progedit/sampler.hpp"
#include "progedit/schedule.hpp"

namespace oracle {

using progedit::GmmWorld;
using progedit::Image;
using progedit::LatentGrid;

// log p_sigma(z) by brute force in long double: every component evaluated
// separately, then a max-shifted sum.
inline long double log_density(std::span<const double> z, double sigma, const GmmWorld& world) {
    std::vector<long double> terms;
    const long double k = static_cast<long double>(z.size());
    for (const auto& c : world.components()) {
        const long double var = static_cast<long double>(c.std) * c.std + static_cast<long double>(sigma) * sigma;
        long double sq = 0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const long double d = static_cast<long double>(z[i]) - c.mean[i];
            sq += d * d;
        }
        terms.push_back(std::log(static_cast<long double>(c.weight)) - 0.5L * k * std::log(2.0L * std::numbers::pi_v<long double> * var) -
                        0.5L * sq / var);
    }
    long double top = terms.front();
    for (long double t : terms) {
        top = std::max(top, t);
    }
    long double acc = 0;
    for (long double t : terms) {
        acc += std::exp(t - top);
    }
    return top + std::log(acc);
}

// Central finite difference of log_density along coordinate i.
inline double fd_partial(std::vector<double> z, std::size_t i, double sigma, const GmmWorld& world, double h) {
    const double base = z[i];
    z[i] = base + h;
    const long double up = log_density(z, sigma, world);
    z[i] = base - h;
    const long double down = log_density(z, sigma, world);
    return static_cast<double>((up - down) / (2.0L * h));
}

inline double rmse(const Image& a, const Image& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(acc / static_cast<double>(a.size()));
}

inline double sigma_at(int t, const progedit::NoiseSchedule& s) {
    return s.sigma_min * std::pow(s.sigma_max / s.sigma_min, static_cast<double>(t) / s.steps);
}

// Single isotropic Gaussian world N(m, s^2 I). Every reverse step is affine in
// (z - m): probability-flow multiplies by a_t, ancestral adds b_t eps.
struct GaussianChain {
    double s = 1.0;
    progedit::NoiseSchedule sched;

    double delta(int t) const { return sigma_at(t, sched) * sigma_at(t, sched) - sigma_at(t - 1, sched) * sigma_at(t - 1, sched); }
    double var_t(int t) const { return s * s + sigma_at(t, sched) * sigma_at(t, sched); }

    double flow_gain(int t) const { return 1.0 - 0.5 * delta(t) / var_t(t); }
    double ancestral_gain(int t) const { return 1.0 - delta(t) / var_t(t); }
    double ancestral_noise_var(int t) const {
        const double st = sigma_at(t, sched);
        const double sp = sigma_at(t - 1, sched);
        return sp * sp * delta(t) / (st * st);
    }

    // Product of flow gains from t_start down to 1.
    double flow_map(int t_start) const {
        double g = 1.0;
        for (int t = t_start; t >= 1; --t) {
            g *= flow_gain(t);
        }
        return g;
    }

    // Mean offset and variance at t = 0 of the ancestral chain started
    // from z_T - m ~ N(offset, var).
    std::pair<double, double> ancestral_moments(int t_start, double offset, double var) const {
        for (int t = t_start; t >= 1; --t) {
            const double a = ancestral_gain(t);
            offset *= a;
            var = a * a * var + ancestral_noise_var(t);
        }
        return {offset, var};
    }
};

// Reconstruction floor for the all-source edit: the source noised to step 1
// and denoised once, plus one 8-bit quantization level.
inline double tau_adh(const Image& x1, const GmmWorld& world, const progedit::EncoderConfig& enc,
                      const progedit::NoiseSchedule& sched, progedit::StepMode mode, std::uint64_t seed) {
    progedit::RngStream noise = progedit::named_stream(seed, "oracle-noise");
    progedit::RngStream step = progedit::named_stream(seed, "oracle-step");
    const LatentGrid z1 = progedit::encode(x1, enc);
    const LatentGrid noisy = progedit::add_noise(z1, 1, sched, noise);
    const LatentGrid z0 = progedit::denoise_step(noisy, 1, sched, world, {}, mode, step);
    return rmse(progedit::decode(z0, enc), x1) + 1.0 / 255.0;
}

}  // namespace oracle
