// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace progedit {

GmmWorld::GmmWorld(Shape shape, std::vector<GmmComponent> components)
    : shape_(shape), components_(std::move(components)) {
    require(shape_.channels > 0 && shape_.height > 0 && shape_.width > 0, ErrorKind::invalid_argument,
            "world shape must be positive");
    require(!components_.empty(), ErrorKind::invalid_argument, "a world needs at least one component");
    double total = 0.0;
    for (const auto& c : components_) {
        require(c.weight > 0.0 && std::isfinite(c.weight), ErrorKind::invalid_argument,
                "component weights must be positive");
        require(c.std > 0.0 && std::isfinite(c.std), ErrorKind::invalid_argument,
                "component stds must be positive");
        require(c.mean.size() == shape_.size(), ErrorKind::dimension_mismatch,
                "component mean has " + std::to_string(c.mean.size()) + " values, world shape " +
                    to_string(shape_) + " needs " + std::to_string(shape_.size()));
        for (double v : c.mean) {
            require(std::isfinite(v), ErrorKind::invalid_argument, "component means must be finite");
        }
        total += c.weight;
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorKind::invalid_argument,
            "component weights must sum to 1 (got " + std::to_string(total) + ")");
}

namespace {

std::vector<std::size_t> active_components(const GmmWorld& world, const Conditioning& cond) {
    std::vector<std::size_t> idx;
    if (cond.kind == Conditioning::Kind::none) {
        idx.resize(world.component_count());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        return idx;
    }
    require(!cond.subset.empty(), ErrorKind::invalid_argument, "conditioning subset is empty");
    idx = cond.subset;
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    require(idx.back() < world.component_count(), ErrorKind::out_of_range,
            "conditioning index " + std::to_string(idx.back()) + " exceeds component count");
    return idx;
}

struct Posterior {
    std::vector<std::size_t> active;
    std::vector<double> log_terms;  // log w_i + log N(z; m_i, v_i I), normalized weights
    double log_total = 0.0;
};

Posterior posterior(const LatentGrid& z, double sigma, const GmmWorld& world, const Conditioning& cond) {
    require(z.shape() == world.shape(), ErrorKind::dimension_mismatch,
            "latent " + to_string(z.shape()) + " does not match world " + to_string(world.shape()));
    require(sigma >= 0.0 && std::isfinite(sigma), ErrorKind::invalid_argument, "sigma must be non-negative");

    Posterior post;
    post.active = active_components(world, cond);
    double weight_sum = 0.0;
    for (std::size_t i : post.active) {
        weight_sum += world.components()[i].weight;
    }
    const double log_weight_sum = std::log(weight_sum);
    const double k = static_cast<double>(world.dimension());
    const auto zv = z.values();

    post.log_terms.reserve(post.active.size());
    for (std::size_t i : post.active) {
        const auto& c = world.components()[i];
        const double var = c.std * c.std + sigma * sigma;
        double dist2 = 0.0;
        for (std::size_t e = 0; e < zv.size(); ++e) {
            const double d = zv[e] - c.mean[e];
            dist2 += d * d;
        }
        post.log_terms.push_back(std::log(c.weight) - log_weight_sum -
                                 0.5 * k * std::log(2.0 * std::numbers::pi * var) - 0.5 * dist2 / var);
    }
    const double peak = *std::max_element(post.log_terms.begin(), post.log_terms.end());
    double acc = 0.0;
    for (double t : post.log_terms) {
        acc += std::exp(t - peak);
    }
    post.log_total = peak + std::log(acc);
    return post;
}

}  // namespace

ScoreField gmm_score(const LatentGrid& z, double sigma, const GmmWorld& world, const Conditioning& cond) {
    const Posterior post = posterior(z, sigma, world, cond);
    ScoreField score(z.shape());
    auto out = score.values();
    const auto zv = z.values();
    for (std::size_t j = 0; j < post.active.size(); ++j) {
        const double r = std::exp(post.log_terms[j] - post.log_total);
        if (r == 0.0) {
            continue;
        }
        const auto& c = world.components()[post.active[j]];
        const double coef = r / (c.std * c.std + sigma * sigma);
        for (std::size_t e = 0; e < zv.size(); ++e) {
            out[e] += coef * (c.mean[e] - zv[e]);
        }
    }
    return score;
}

double gmm_log_density(const LatentGrid& z, double sigma, const GmmWorld& world, const Conditioning& cond) {
    return posterior(z, sigma, world, cond).log_total;
}

double squared_norm(const ScoreField& s) {
    double acc = 0.0;
    for (double v : s.values()) {
        acc += v * v;
    }
    return acc;
}

GmmWorld kde_world_from_patches(const std::vector<Image>& patches, double bandwidth,
                                const EncoderConfig& cfg) {
    require(!patches.empty(), ErrorKind::invalid_argument, "at least one patch is required");
    require(bandwidth > 0.0, ErrorKind::invalid_argument, "bandwidth must be positive");
    const Shape first = patches.front().shape();
    std::vector<GmmComponent> comps;
    comps.reserve(patches.size());
    const double weight = 1.0 / static_cast<double>(patches.size());
    for (const auto& p : patches) {
        require(p.shape() == first, ErrorKind::dimension_mismatch, "patches must share dimensions");
        const LatentGrid z = encode(p, cfg);
        comps.push_back({weight, std::vector<double>(z.values().begin(), z.values().end()), bandwidth});
    }
    return GmmWorld(cfg.latent_shape(first), std::move(comps));
}

nlohmann::json to_json(const GmmWorld& world) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : world.components()) {
        comps.push_back({{"weight", c.weight}, {"mean", c.mean}, {"std", c.std}});
    }
    nlohmann::json doc = {
        {"shape", {world.shape().channels, world.shape().height, world.shape().width}},
        {"components", std::move(comps)},
    };
    if (!world.description.empty()) {
        doc["description"] = world.description;
    }
    return doc;
}

GmmWorld world_from_json(const nlohmann::json& doc) {
    try {
        require(doc.is_object(), ErrorKind::parse, "world document must be an object");
        const auto& shape = doc.at("shape");
        require(shape.is_array() && shape.size() == 3, ErrorKind::parse, "world shape must be [c,h,w]");
        const Shape s{shape[0].get<int>(), shape[1].get<int>(), shape[2].get<int>()};
        std::vector<GmmComponent> comps;
        for (const auto& c : doc.at("components")) {
            comps.push_back({c.at("weight").get<double>(), c.at("mean").get<std::vector<double>>(),
                             c.at("std").get<double>()});
        }
        GmmWorld world(s, std::move(comps));
        world.description = doc.value("description", std::string{});
        return world;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, std::string("malformed world JSON: ") + e.what());
    }
}

}  // namespace progedit
