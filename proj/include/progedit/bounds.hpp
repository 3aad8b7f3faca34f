// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "progedit/editor.hpp"
#include "progedit/gmm.hpp"
#include "progedit/sampler.hpp"
#include "progedit/schedule.hpp"

namespace progedit {

// Upper-tail level of a central chi-squared variable with k degrees:
//   k + 2 sqrt(-k ln p) - 2 ln p,  exceeded with probability at most p.
double chi_square_tail_threshold(long k, double p_tail);

struct BoundInputs {
    double sigma_tds = 0.0;  // sigma(t_ds)
    double B = 0.0;          // sup ||score||^2 estimate
    long k = 1;              // latent degrees of freedom
    double p_tail = 0.1;
};

// sigma^4 B + sigma^2 chi_square_tail_threshold(k, p)
double lemma1_bound(const BoundInputs& in);

struct BoundCheckOptions {
    double p_tail = 0.1;
    int n_runs = 1000;
    int b_samples = 16;
    double bound_scale = 1.0;  // < 1 tightens the bound artificially
    Conditioning conditioning;
    int workers = 1;
};

struct BoundReport {
    double bound = 0.0;  // scaled bound actually compared against
    int n_runs = 0;
    int n_within = 0;
    double empirical_coverage = 0.0;
    BoundInputs inputs;
    int t_ds = 0;
    double bound_scale = 1.0;
    double mean_sq_distance = 0.0;
    double max_sq_distance = 0.0;
    std::string b_protocol;
};

// Per realization: perturb z_surgical to sigma(t_ds), run the ancestral
// reverse chain to level 0 and test ||z(0) - z(t_ds)||^2 against the bound,
// with B estimated on the same world. Run i draws from child stream
// "run-<i>", B from child stream "B"; results do not depend on workers.
BoundReport verify_bound(const GmmWorld& world, const LatentGrid& z_surgical, int t_ds, const NoiseSchedule& sched,
                         const BoundCheckOptions& options, const RngStream& rng);

nlohmann::json to_json(const BoundReport& report);

struct TdsScanPoint {
    int t_ds = 0;
    double realism = 0.0;
};

struct TdsRecommendation {
    int t_ds = 0;
    bool reached = false;
    std::vector<TdsScanPoint> scan;
};

// Smallest t_ds on the grid {0, T/10, ..., T} whose progressive edit has
// realism_proxy >= realism_floor; T with reached = false otherwise.
TdsRecommendation recommend_tds(const Image& x1, const Image& x2, const EditMap& mu, const GmmWorld& world,
                                const EncoderConfig& cfg, double realism_floor, const EditParams& params);

std::vector<int> tds_grid(int steps);

}  // namespace progedit
