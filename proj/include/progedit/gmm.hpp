// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "progedit/codec.hpp"
#include "progedit/grid.hpp"

namespace progedit {

struct GmmComponent {
    double weight = 1.0;
    std::vector<double> mean;  // flattened, matches the world shape
    double std = 1.0;          // isotropic
};

// Isotropic Gaussian mixture over latents of a fixed shape. Immutable after
// construction, so a single instance can be shared across threads.
class GmmWorld {
public:
    GmmWorld(Shape shape, std::vector<GmmComponent> components);

    const Shape& shape() const { return shape_; }
    std::size_t dimension() const { return shape_.size(); }
    const std::vector<GmmComponent>& components() const { return components_; }
    std::size_t component_count() const { return components_.size(); }

    std::string description;

private:
    Shape shape_;
    std::vector<GmmComponent> components_;
};

// Stand-in for prompt guidance: restrict the mixture to a component subset.
struct Conditioning {
    enum class Kind { none, component_subset };

    Kind kind = Kind::none;
    std::vector<std::size_t> subset;

    static Conditioning none() { return {}; }
    static Conditioning components(std::vector<std::size_t> indices) {
        return {Kind::component_subset, std::move(indices)};
    }
};

// Exact score of the mixture convolved with N(0, sigma^2 I):
//   sum_i r_i(z) (m_i - z) / (std_i^2 + sigma^2)
// with responsibilities r_i computed in log space.
ScoreField gmm_score(const LatentGrid& z, double sigma, const GmmWorld& world,
                     const Conditioning& cond = {});

// log p_sigma(z) of the (restricted, renormalized) mixture.
double gmm_log_density(const LatentGrid& z, double sigma, const GmmWorld& world,
                       const Conditioning& cond = {});

double squared_norm(const ScoreField& s);

// Equal-weight mixture, one component per encoded patch, std = bandwidth.
GmmWorld kde_world_from_patches(const std::vector<Image>& patches, double bandwidth,
                                const EncoderConfig& cfg);

nlohmann::json to_json(const GmmWorld& world);
GmmWorld world_from_json(const nlohmann::json& doc);

}  // namespace progedit
