// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "progedit/error.hpp"
#include "progedit/fixtures.hpp"
#include "progedit/gmm.hpp"

using namespace progedit;

namespace {

GmmWorld single(Shape s, double m, double sd) {
    return GmmWorld(s, {{1.0, std::vector<double>(s.size(), m), sd}});
}

GmmWorld two_component(std::uint64_t seed) {
    const Shape s{1, 2, 3};
    RngStream rng(seed);
    std::vector<GmmComponent> comps;
    for (double w : {0.3, 0.7}) {
        GmmComponent c{w, std::vector<double>(s.size()), 0.4 + rng.uniform()};
        for (auto& v : c.mean) {
            v = 2.0 * rng.gaussian();
        }
        comps.push_back(std::move(c));
    }
    return GmmWorld(s, std::move(comps));
}

LatentGrid jitter(const std::vector<double>& around, double scale, RngStream& rng, Shape s) {
    LatentGrid z(s);
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = around[i] + scale * rng.gaussian();
    }
    return z;
}

// Worst relative error of the analytic score against central differences,
// measured on the vector norm so tiny components do not dominate.
double fd_error(const LatentGrid& z, double sigma, const GmmWorld& world, std::size_t stride = 1) {
    const ScoreField s = gmm_score(z, sigma, world);
    const std::vector<double> zv(z.values().begin(), z.values().end());
    double scale = 0.0;
    for (double v : zv) {
        scale = std::max(scale, std::abs(v));
    }
    const double h = 1e-4 * std::max(scale, 1e-2);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < zv.size(); i += stride) {
        const double fd = oracle::fd_partial(zv, i, sigma, world, h);
        num += (s[i] - fd) * (s[i] - fd);
        den += fd * fd;
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

}  // namespace

TEST_CASE("single component closed form") {
    const Shape s{1, 2, 2};
    const GmmWorld w = single(s, 0.0, 1.0);
    const ScoreField sc = gmm_score(LatentGrid(s, 2.0), 0.0, w);
    for (double v : sc.values()) {
        CHECK(v == -2.0);
    }
    const ScoreField at_mean = gmm_score(LatentGrid(s, 0.0), 0.7, w);
    for (double v : at_mean.values()) {
        CHECK(v == 0.0);
    }
    // ||score||^2 = ||z||^2 / (1 + sigma^2)^2
    const double sigma = 0.5;
    const LatentGrid z(s, std::vector<double>{1, -2, 3, 0.5});
    const double norm2 = 1 + 4 + 9 + 0.25;
    CHECK(squared_norm(gmm_score(z, sigma, w)) ==
          doctest::Approx(norm2 / std::pow(1 + sigma * sigma, 2)).epsilon(1e-14));
}

TEST_CASE("two-component score matches finite differences") {
    const GmmWorld w = two_component(1);
    RngStream rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto& mean = w.components()[trial % 2].mean;
        const LatentGrid z = jitter(mean, 1.0, rng, w.shape());
        for (double sigma : {0.0, 0.3, 2.0}) {
            CHECK(fd_error(z, sigma, w) <= 1e-5);
        }
    }
}

TEST_CASE("responsibilities stay finite far from every component") {
    const GmmWorld w = two_component(3);
    const LatentGrid far(w.shape(), 1e3);
    const ScoreField s = gmm_score(far, 0.01, w);
    for (double v : s.values()) {
        CHECK(std::isfinite(v));
    }
    CHECK(std::isfinite(gmm_log_density(far, 0.01, w)));
}

TEST_CASE("log density matches the brute-force oracle") {
    const GmmWorld w = two_component(4);
    RngStream rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const LatentGrid z = jitter(w.components()[0].mean, 2.0, rng, w.shape());
        const double expected = static_cast<double>(oracle::log_density(z.values(), 0.2, w));
        CHECK(gmm_log_density(z, 0.2, w) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("conditioning restricts and renormalizes") {
    const GmmWorld w = two_component(6);
    RngStream rng(7);
    const LatentGrid z = jitter(w.components()[1].mean, 0.5, rng, w.shape());
    CHECK(gmm_score(z, 0.3, w, Conditioning::components({0, 1})) == gmm_score(z, 0.3, w));
    CHECK(gmm_score(z, 0.3, w, Conditioning::components({1, 0, 1})) == gmm_score(z, 0.3, w));
    CHECK(gmm_log_density(z, 0.3, w, Conditioning::components({0, 1})) == gmm_log_density(z, 0.3, w));

    const auto& c1 = w.components()[1];
    const GmmWorld only1(w.shape(), {{1.0, c1.mean, c1.std}});
    const ScoreField a = gmm_score(z, 0.3, w, Conditioning::components({1}));
    const ScoreField b = gmm_score(z, 0.3, only1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
    }
    CHECK_THROWS_AS(gmm_score(z, 0.3, w, Conditioning::components({2})), Error);
}

TEST_CASE("world construction is validated") {
    const Shape s{1, 1, 2};
    CHECK_THROWS_AS(GmmWorld(s, {}), Error);
    CHECK_THROWS_AS(GmmWorld(s, {{0.5, {0, 0}, 1.0}}), Error);
    CHECK_THROWS_AS(GmmWorld(s, {{1.0, {0, 0, 0}, 1.0}}), Error);
    CHECK_THROWS_AS(GmmWorld(s, {{1.0, {0, 0}, 0.0}}), Error);
    CHECK_THROWS_AS(gmm_score(LatentGrid(Shape{1, 2, 2}), 0.1, single(s, 0, 1)), Error);
}

TEST_CASE("KDE worlds") {
    const EncoderConfig enc = fixtures::encoder();
    const Image a = fixtures::texture_a();
    const GmmWorld one = kde_world_from_patches({a}, 0.05, enc);
    REQUIRE(one.component_count() == 1);
    const LatentGrid za = encode(a, enc);
    CHECK(one.components()[0].mean == std::vector<double>(za.values().begin(), za.values().end()));
    CHECK(one.components()[0].std == 0.05);

    const GmmWorld three = kde_world_from_patches({a, a, a}, 0.05, enc);
    RngStream rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const LatentGrid z = jitter(one.components()[0].mean, 0.1, rng, one.shape());
        CHECK(gmm_log_density(z, 0.1, three) == doctest::Approx(gmm_log_density(z, 0.1, one)).epsilon(1e-12));
    }
}

TEST_CASE("fixture worlds match finite differences") {
    for (const auto& named : fixtures::bundled_worlds()) {
        CAPTURE(named.name);
        const GmmWorld& w = named.world;
        RngStream rng(fnv1a64(named.name));
        for (int trial = 0; trial < 20; ++trial) {
            const auto& mean = w.components()[trial % w.component_count()].mean;
            const LatentGrid z = jitter(mean, 0.05, rng, w.shape());
            CHECK(fd_error(z, 0.1, w, 37) <= 1e-4);
        }
    }
}

TEST_CASE("world JSON round trip") {
    GmmWorld w = two_component(9);
    w.description = "test";
    const nlohmann::json doc = to_json(w);
    CHECK(doc.at("shape") == nlohmann::json::array({1, 2, 3}));
    const GmmWorld back = world_from_json(doc);
    CHECK(back.shape() == w.shape());
    CHECK(back.description == "test");
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.components()[i].mean == w.components()[i].mean);
        CHECK(back.components()[i].weight == w.components()[i].weight);
        CHECK(back.components()[i].std == w.components()[i].std);
    }
    const auto kind = [](const nlohmann::json& j) {
        try {
            world_from_json(j);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::dimension_mismatch;
    };
    CHECK(kind(nlohmann::json::array()) == ErrorKind::parse);
    CHECK(kind({{"shape", {1, 1}}, {"components", nlohmann::json::array()}}) == ErrorKind::parse);
    CHECK(kind({{"shape", {1, 1, 1}}}) == ErrorKind::parse);
    CHECK(kind({{"shape", {1, 1, 1}}, {"components", {{{"weight", "x"}, {"mean", {0}}, {"std", 1}}}}}) ==
          ErrorKind::parse);
}
