// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "progedit/editor.hpp"
#include "progedit/error.hpp"
#include "progedit/threshold.hpp"

using namespace progedit;

TEST_CASE("threshold formulas") {
    CHECK(threshold_value(ThresholdKind::linear, 0, 50) == 0.0);
    CHECK(threshold_value(ThresholdKind::cubic, 50, 100) == 0.125);
    CHECK(threshold_value(ThresholdKind::quadratic, 50, 100) == 0.25);
    CHECK(threshold_value(ThresholdKind::sigmoid, 50, 100) == 0.5);
    CHECK(threshold_value(ThresholdKind::log, 9, 99) == doctest::Approx(std::log(10.0) / std::log(100.0)));
    CHECK(threshold_value(ThresholdKind::linear, 37, 100) == 0.37);
}

TEST_CASE("threshold domain") {
    CHECK_THROWS_AS(threshold_value(ThresholdKind::linear, 100, 100), Error);
    CHECK_THROWS_AS(threshold_value(ThresholdKind::linear, -1, 100), Error);
    CHECK_THROWS_AS(threshold_value(ThresholdKind::linear, 0, 0), Error);
    CHECK(parse_threshold_kind("cubic") == ThresholdKind::cubic);
    CHECK_THROWS_AS(parse_threshold_kind("cosine"), Error);
    for (ThresholdKind k : kAllThresholdKinds) {
        CHECK(parse_threshold_kind(to_string(k)) == k);
    }
}

TEST_CASE("every kind is non-decreasing and stays in [0,1)") {
    for (int n : {1, 2, 7, 50, 100, 1000}) {
        for (ThresholdKind k : kAllThresholdKinds) {
            const auto curve = threshold_curve(k, n);
            REQUIRE(curve.size() == static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                CHECK(curve[i] >= 0.0);
                CHECK(curve[i] < 1.0);
                if (i > 0) {
                    CHECK(curve[i] >= curve[i - 1]);
                }
            }
        }
    }
}

TEST_CASE("dominance chain log >= linear >= quadratic >= cubic") {
    for (int n : {2, 10, 50, 100, 333}) {
        for (int i = 0; i < n; ++i) {
            const double lg = threshold_value(ThresholdKind::log, i, n);
            const double li = threshold_value(ThresholdKind::linear, i, n);
            const double qu = threshold_value(ThresholdKind::quadratic, i, n);
            const double cu = threshold_value(ThresholdKind::cubic, i, n);
            CHECK(lg >= li);
            CHECK(li >= qu);
            CHECK(qu >= cu);
        }
        const double a_log = threshold_auc(ThresholdKind::log, n);
        const double a_lin = threshold_auc(ThresholdKind::linear, n);
        const double a_quad = threshold_auc(ThresholdKind::quadratic, n);
        const double a_cub = threshold_auc(ThresholdKind::cubic, n);
        CHECK(a_log > a_lin);
        CHECK(a_lin > a_quad);
        CHECK(a_quad > a_cub);
    }
}

TEST_CASE("linear AUC is the arithmetic series") {
    CHECK(threshold_auc(ThresholdKind::linear, 100) == 0.495);
    for (int n : {2, 10, 50, 1000}) {
        CHECK(threshold_auc(ThresholdKind::linear, n) == static_cast<double>(n - 1) / (2.0 * n));
    }
}

TEST_CASE("AUC against a direct mean") {
    for (ThresholdKind k : kAllThresholdKinds) {
        long double acc = 0;
        for (int i = 0; i < 100; ++i) {
            acc += threshold_value(k, i, 100);
        }
        CHECK(threshold_auc(k, 100) == doctest::Approx(static_cast<double>(acc / 100)).epsilon(1e-15));
    }
}

TEST_CASE("mask_at uses a strict comparison") {
    CHECK(mask_at(EditMap(3, 3, 0.2), 0.0).count() == 9);
    CHECK(mask_at(EditMap(3, 3, 0.5), 0.5).count() == 0);
    const EditMap mixed(1, 4, std::vector<double>{0.0, 0.3, 0.9, 1.0});
    CHECK(mask_at(mixed, 1.0).count() == 0);
    CHECK(mask_at(mixed, 0.0).count() == 3);
    CHECK(mask_at(mixed, 0.3).count() == 2);
    CHECK_THROWS_AS(mask_at(mixed, NAN), Error);
}
