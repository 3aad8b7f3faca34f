// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include <json.hpp>

#include "progedit/codec.hpp"
#include "progedit/gmm.hpp"
#include "progedit/grid.hpp"

namespace progedit {

// mu-weighted RMSE against the source and (1 - mu)-weighted RMSE against the
// exemplar. A region with zero total weight reports 0 and sets its flag.
struct Adherence {
    double source = 0.0;
    double exemplar = 0.0;
    bool source_empty = false;
    bool exemplar_empty = false;
};

Adherence adherence(const Image& edit, const Image& source, const Image& exemplar, const EditMap& mu);

// log p_sigma(encode(edit)) / k under the world, sigma defaulting to the
// schedule floor.
double realism_proxy(const Image& edit, const GmmWorld& world, const EncoderConfig& cfg, double sigma = 0.01);

struct Band {
    double lo = 0.05;
    double hi = 0.95;
};

// Mean squared forward-difference gradient magnitude over pixels whose map
// value lies strictly inside the band. nullopt when no pixel qualifies.
std::optional<double> boundary_smoothness(const Image& edit, const EditMap& mu, Band band = {});

struct EditScore {
    Adherence adherence;
    double realism = 0.0;
    std::optional<double> boundary_smoothness;
};

EditScore score_edit(const Image& edit, const Image& source, const Image& exemplar, const EditMap& mu,
                     const GmmWorld& world, const EncoderConfig& cfg, Band band = {});

nlohmann::json to_json(const EditScore& score);

}  // namespace progedit
