// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "progedit/bounds.hpp"
#include "progedit/error.hpp"
#include "progedit/fixtures.hpp"
#include "progedit/metrics.hpp"
#include "progedit/sampler.hpp"

using namespace progedit;

namespace {

LatentGrid gaussian_mean(const GmmWorld& w) { return LatentGrid(w.shape(), w.components()[0].mean); }

double prior_var(const NoiseSchedule& s) { return s.sigma_max * s.sigma_max; }

}  // namespace

TEST_CASE("chi-square tail level closed form") {
    // k = 1, p = 1/e: 1 + 2 + 2
    CHECK(chi_square_tail_threshold(1, std::exp(-1.0)) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(chi_square_tail_threshold(1024, 1.0 - 1e-12) == doctest::Approx(1024.0).epsilon(1e-5));
    for (long k : {1L, 8L, 1024L}) {
        for (double p : {0.01, 0.1, 0.5, 0.9}) {
            CHECK(chi_square_tail_threshold(k, p) >= static_cast<double>(k));
        }
    }
    CHECK_THROWS_AS(chi_square_tail_threshold(0, 0.1), Error);
    CHECK_THROWS_AS(chi_square_tail_threshold(4, 0.0), Error);
    CHECK_THROWS_AS(chi_square_tail_threshold(4, 1.0), Error);
}

TEST_CASE("chi-square tail level is exceeded at most p of the time") {
    std::mt19937_64 gen(42);
    std::chi_squared_distribution<double> chi(8.0);
    const double level = chi_square_tail_threshold(8, 0.05);
    const int n = 1000000;
    int over = 0;
    for (int i = 0; i < n; ++i) {
        over += chi(gen) > level;
    }
    CHECK(static_cast<double>(over) / n <= 0.05);
}

TEST_CASE("bound formula") {
    CHECK(lemma1_bound({0.0, 1e6, 16, 0.1}) == 0.0);
    const double tail = chi_square_tail_threshold(16, 0.1);
    CHECK(lemma1_bound({0.5, 0.0, 16, 0.1}) == doctest::Approx(0.25 * tail));
    CHECK(lemma1_bound({0.5, 3.0, 16, 0.1}) == doctest::Approx(0.0625 * 3.0 + 0.25 * tail));
    double prev = 0.0;
    for (double s : {0.01, 0.1, 1.0, 10.0}) {
        const double b = lemma1_bound({s, 7.0, 16, 0.1});
        CHECK(b > prev);
        prev = b;
    }
    CHECK(lemma1_bound({1.0, 1.0, 16, 0.01}) > lemma1_bound({1.0, 1.0, 16, 0.1}));
    CHECK_THROWS_AS(lemma1_bound({-1.0, 1.0, 16, 0.1}), Error);
    CHECK_THROWS_AS(lemma1_bound({1.0, -1.0, 16, 0.1}), Error);
}

TEST_CASE("bound fixture on the single gaussian world") {
    // B frozen at seed 2026 (see the sampler tests); sigma(25) under the
    // default schedule
    const NoiseSchedule s;
    const BEstimate b = estimate_B(fixtures::single_gaussian_world(), s, 16, named_stream(2026, "B"));
    const double bound = lemma1_bound({sigma(25, s), b.value, 1024, 0.1});
    CHECK(bound == doctest::Approx(1063.9420759194763).epsilon(1e-9));
}

TEST_CASE("verify_bound at t_ds = 0 is trivially covered") {
    const NoiseSchedule s;
    const GmmWorld w = fixtures::single_gaussian_world();
    BoundCheckOptions opt;
    opt.n_runs = 100;
    opt.b_samples = 2;
    const BoundReport r = verify_bound(w, gaussian_mean(w), 0, s, opt, named_stream(1, "bound"));
    CHECK(r.empirical_coverage == 1.0);
    CHECK(r.max_sq_distance == 0.0);
}

TEST_CASE("verify_bound coverage on the single gaussian world") {
    const NoiseSchedule s;
    const GmmWorld w = fixtures::single_gaussian_world();
    BoundCheckOptions opt;
    opt.n_runs = 1000;
    opt.p_tail = 0.1;
    const RngStream root = named_stream(3, "bound");
    const BoundReport r = verify_bound(w, gaussian_mean(w), 25, s, opt, root);
    CHECK(r.n_runs == 1000);
    CHECK(r.empirical_coverage >= 0.87);
    CHECK(r.inputs.k == 1024);
    CHECK(r.inputs.B >= prior_var(s));
    CHECK(r.mean_sq_distance <= r.max_sq_distance);

    BoundCheckOptions tight = opt;
    tight.bound_scale = 0.5;
    const BoundReport t = verify_bound(w, gaussian_mean(w), 25, s, tight, root);
    CHECK(t.bound == doctest::Approx(0.5 * r.bound));
    CHECK(t.n_within <= r.n_within);
    // same realizations either way
    CHECK(t.max_sq_distance == r.max_sq_distance);

    const nlohmann::json j = to_json(r);
    CHECK(j["n_within"] == r.n_within);
    CHECK(j["inputs"]["k"] == 1024);
}

TEST_CASE("verify_bound does not depend on the worker count") {
    const NoiseSchedule s;
    const GmmWorld w = fixtures::single_gaussian_world();
    BoundCheckOptions opt;
    opt.n_runs = 120;
    opt.b_samples = 4;
    const RngStream root = named_stream(4, "bound");
    const BoundReport one = verify_bound(w, gaussian_mean(w), 20, s, opt, root);
    opt.workers = 7;
    const BoundReport many = verify_bound(w, gaussian_mean(w), 20, s, opt, root);
    CHECK(one.n_within == many.n_within);
    CHECK(one.mean_sq_distance == many.mean_sq_distance);
    CHECK(one.max_sq_distance == many.max_sq_distance);
    CHECK(one.inputs.B == many.inputs.B);
}

TEST_CASE("verify_bound validation") {
    const NoiseSchedule s;
    const GmmWorld w = fixtures::single_gaussian_world();
    BoundCheckOptions opt;
    opt.n_runs = 99;
    CHECK_THROWS_AS(verify_bound(w, gaussian_mean(w), 10, s, opt, RngStream(1)), Error);
    opt.n_runs = 100;
    CHECK_THROWS_AS(verify_bound(w, gaussian_mean(w), 51, s, opt, RngStream(1)), Error);
    CHECK_THROWS_AS(verify_bound(w, LatentGrid(Shape{1, 2, 2}), 10, s, opt, RngStream(1)), Error);
    opt.bound_scale = 0.0;
    CHECK_THROWS_AS(verify_bound(w, gaussian_mean(w), 10, s, opt, RngStream(1)), Error);
}

TEST_CASE("t_ds grid") {
    CHECK(tds_grid(50) == std::vector<int>{0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50});
    CHECK(tds_grid(5) == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(tds_grid(1) == std::vector<int>{0, 1});
    CHECK(tds_grid(24).front() == 0);
    CHECK(tds_grid(24).back() == 24);
}

TEST_CASE("recommend_tds edge cases") {
    const GmmWorld w = fixtures::texture_a_world();
    const EncoderConfig enc = fixtures::encoder();
    const Image x1 = fixtures::texture_a();
    const EditMap mu = fixtures::ramp_map();
    EditParams p;
    p.schedule.steps = 10;
    p.t_ds_max = 10;
    p.seed = 5;

    const TdsRecommendation any = recommend_tds(x1, fixtures::ladder_exemplar(1.0), mu, w, enc,
                                                -std::numeric_limits<double>::infinity(), p);
    CHECK(any.t_ds == 0);
    CHECK(any.reached);
    CHECK(any.scan.size() == 1);

    // an exemplar equal to the source scores as the source does, less the
    // sigma(0) perturbation the init step still applies
    const double floor = realism_proxy(x1, w, enc, p.schedule.sigma_min) - 0.1;
    const TdsRecommendation same = recommend_tds(x1, x1, mu, w, enc, floor, p);
    CHECK(same.t_ds == 0);

    const TdsRecommendation never = recommend_tds(x1, x1, mu, w, enc, std::numeric_limits<double>::infinity(), p);
    CHECK_FALSE(never.reached);
    CHECK(never.t_ds == 10);
    CHECK(never.scan.size() == tds_grid(10).size());
}
