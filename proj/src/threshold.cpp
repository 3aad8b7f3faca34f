// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/threshold.hpp"

#include <cmath>
#include <string>

#include "progedit/error.hpp"

namespace progedit {

std::string_view to_string(ThresholdKind kind) {
    switch (kind) {
    case ThresholdKind::linear:
        return "linear";
    case ThresholdKind::cubic:
        return "cubic";
    case ThresholdKind::quadratic:
        return "quadratic";
    case ThresholdKind::log:
        return "log";
    case ThresholdKind::sigmoid:
        return "sigmoid";
    }
    return "linear";
}

ThresholdKind parse_threshold_kind(std::string_view text) {
    for (ThresholdKind kind : kAllThresholdKinds) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    fail(ErrorKind::invalid_argument, "unknown threshold kind '" + std::string(text) + "'");
}

double threshold_value(ThresholdKind kind, int i, int n) {
    require(n >= 1 && i >= 0 && i < n, ErrorKind::out_of_range,
            "threshold index " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
    const double x = static_cast<double>(i) / n;
    switch (kind) {
    case ThresholdKind::linear:
        return x;
    case ThresholdKind::cubic:
        return x * x * x;
    case ThresholdKind::quadratic:
        return x * x;
    case ThresholdKind::log:
        return std::log1p(static_cast<double>(i)) / std::log1p(static_cast<double>(n));
    case ThresholdKind::sigmoid:
        return 1.0 / (1.0 + std::exp(-(6.0 * x - 3.0)));
    }
    return x;
}

std::vector<double> threshold_curve(ThresholdKind kind, int n) {
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        out.push_back(threshold_value(kind, i, n));
    }
    return out;
}

double threshold_auc(ThresholdKind kind, int n) {
    // Neumaier summation; keeps the linear AUC at the exact (n-1)/(2n)
    double sum = 0.0;
    double carry = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = threshold_value(kind, i, n);
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return (sum + carry) / n;
}

}  // namespace progedit
