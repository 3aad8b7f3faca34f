// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "progedit/blend.hpp"
#include "progedit/metrics.hpp"

namespace progedit {

double chi_square_tail_threshold(long k, double p_tail) {
    require(k >= 1, ErrorKind::invalid_argument, "degrees of freedom must be positive");
    require(p_tail > 0.0 && p_tail < 1.0, ErrorKind::out_of_range, "p_tail must lie in (0, 1)");
    const double neg_log_p = -std::log(p_tail);
    const double kd = static_cast<double>(k);
    return kd + 2.0 * std::sqrt(kd * neg_log_p) + 2.0 * neg_log_p;
}

double lemma1_bound(const BoundInputs& in) {
    require(in.sigma_tds >= 0.0 && std::isfinite(in.sigma_tds), ErrorKind::invalid_argument,
            "sigma_tds must be non-negative");
    require(in.B >= 0.0 && std::isfinite(in.B), ErrorKind::invalid_argument, "B must be non-negative");
    const double s2 = in.sigma_tds * in.sigma_tds;
    return s2 * s2 * in.B + s2 * chi_square_tail_threshold(in.k, in.p_tail);
}

BoundReport verify_bound(const GmmWorld& world, const LatentGrid& z_surgical, int t_ds, const NoiseSchedule& sched,
                         const BoundCheckOptions& options, const RngStream& rng) {
    sched.validate();
    require(options.n_runs >= 100, ErrorKind::invalid_argument, "verify_bound needs at least 100 runs");
    require(options.bound_scale > 0.0, ErrorKind::invalid_argument, "bound_scale must be positive");
    require(z_surgical.shape() == world.shape(), ErrorKind::dimension_mismatch,
            "surgical latent does not match the world");
    require(t_ds >= 0 && t_ds <= sched.steps, ErrorKind::out_of_range, "t_ds outside the schedule");

    const BEstimate b = estimate_B(world, sched, options.b_samples, rng.derive("B"), options.conditioning);

    BoundReport report;
    report.t_ds = t_ds;
    report.n_runs = options.n_runs;
    report.bound_scale = options.bound_scale;
    report.b_protocol = b.protocol;
    report.inputs = {sigma(t_ds, sched), b.value, static_cast<long>(world.dimension()), options.p_tail};
    report.bound = options.bound_scale * lemma1_bound(report.inputs);

    std::vector<double> sq(options.n_runs);
    const auto run_range = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            RngStream stream = rng.derive("run-" + std::to_string(i));
            const LatentGrid start = add_noise(z_surgical, t_ds, sched, stream);
            const LatentGrid end_state =
                full_reverse(start, t_ds, sched, world, options.conditioning, StepMode::ancestral, stream);
            const double d = latent_distance(end_state, start);
            sq[i] = d * d;
        }
    };
    const int workers = std::clamp(options.workers, 1, options.n_runs);
    if (workers == 1) {
        run_range(0, options.n_runs);
    } else {
        std::vector<std::jthread> pool;
        const int chunk = (options.n_runs + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(options.n_runs, begin + chunk);
            if (begin < end) {
                pool.emplace_back(run_range, begin, end);
            }
        }
    }

    double total = 0.0;
    for (double d2 : sq) {
        total += d2;
        report.max_sq_distance = std::max(report.max_sq_distance, d2);
        if (d2 <= report.bound) {
            ++report.n_within;
        }
    }
    report.mean_sq_distance = total / options.n_runs;
    report.empirical_coverage = static_cast<double>(report.n_within) / options.n_runs;
    return report;
}

nlohmann::json to_json(const BoundReport& report) {
    return {
        {"bound", report.bound},
        {"n_runs", report.n_runs},
        {"n_within", report.n_within},
        {"empirical_coverage", report.empirical_coverage},
        {"t_ds", report.t_ds},
        {"bound_scale", report.bound_scale},
        {"mean_sq_distance", report.mean_sq_distance},
        {"max_sq_distance", report.max_sq_distance},
        {"inputs",
         {{"sigma_tds", report.inputs.sigma_tds},
          {"B", report.inputs.B},
          {"k", report.inputs.k},
          {"p_tail", report.inputs.p_tail}}},
        {"b_protocol", report.b_protocol},
    };
}

std::vector<int> tds_grid(int steps) {
    std::vector<int> grid;
    for (int j = 0; j <= 10; ++j) {
        const int t = static_cast<int>(std::lround(j * steps / 10.0));
        if (grid.empty() || grid.back() != t) {
            grid.push_back(t);
        }
    }
    return grid;
}

TdsRecommendation recommend_tds(const Image& x1, const Image& x2, const EditMap& mu, const GmmWorld& world,
                                const EncoderConfig& cfg, double realism_floor, const EditParams& params) {
    TdsRecommendation rec;
    rec.t_ds = params.schedule.steps;
    for (int t : tds_grid(params.schedule.steps)) {
        EditParams p = params;
        p.t_ds_max = t;
        p.retain_steps = false;
        const EditResult r = progressive_edit(x1, x2, mu, p, world, cfg);
        const double realism = realism_proxy(r.output, world, cfg, params.schedule.sigma_min);
        rec.scan.push_back({t, realism});
        if (realism >= realism_floor) {
            rec.t_ds = t;
            rec.reached = true;
            break;
        }
    }
    return rec;
}

}  // namespace progedit
