// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string_view>
#include <vector>

namespace progedit {

enum class ThresholdKind { linear, cubic, quadratic, log, sigmoid };

inline constexpr std::array<ThresholdKind, 5> kAllThresholdKinds = {
    ThresholdKind::linear, ThresholdKind::cubic, ThresholdKind::quadratic, ThresholdKind::log,
    ThresholdKind::sigmoid};

std::string_view to_string(ThresholdKind kind);
ThresholdKind parse_threshold_kind(std::string_view text);

// Threshold curve g(i) over loop index i in [0, n). With x = i / n:
//   linear x, quadratic x^2, cubic x^3, log log(1+i)/log(1+n),
//   sigmoid 1 / (1 + exp(-(6x - 3))).
double threshold_value(ThresholdKind kind, int i, int n);

std::vector<double> threshold_curve(ThresholdKind kind, int n);

// Mean of the curve over its n samples: the share of the schedule during
// which a given map level is still below the threshold.
double threshold_auc(ThresholdKind kind, int n);

}  // namespace progedit
