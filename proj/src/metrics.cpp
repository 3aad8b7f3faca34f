// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/metrics.hpp"

#include <cmath>

namespace progedit {

namespace {

void check_same(const Image& a, const Image& b, const char* what) {
    require(a.shape() == b.shape(), ErrorKind::dimension_mismatch,
            std::string(what) + ": " + to_string(a.shape()) + " vs " + to_string(b.shape()));
}

void check_map(const Image& img, const EditMap& mu) {
    require(mu.height() == img.height() && mu.width() == img.width(), ErrorKind::dimension_mismatch,
            "edit map does not match image dimensions");
}

}  // namespace

Adherence adherence(const Image& edit, const Image& source, const Image& exemplar, const EditMap& mu) {
    check_same(edit, source, "edit vs source");
    check_same(edit, exemplar, "edit vs exemplar");
    check_map(edit, mu);
    const std::size_t plane = edit.shape().plane();
    double ws = 0.0, we = 0.0, es = 0.0, ee = 0.0;
    for (std::size_t i = 0; i < edit.size(); ++i) {
        const double w = mu[i % plane];
        const double ds = edit[i] - source[i];
        const double de = edit[i] - exemplar[i];
        ws += w;
        es += w * ds * ds;
        we += 1.0 - w;
        ee += (1.0 - w) * de * de;
    }
    Adherence out;
    out.source_empty = ws == 0.0;
    out.exemplar_empty = we == 0.0;
    out.source = out.source_empty ? 0.0 : std::sqrt(es / ws);
    out.exemplar = out.exemplar_empty ? 0.0 : std::sqrt(ee / we);
    return out;
}

double realism_proxy(const Image& edit, const GmmWorld& world, const EncoderConfig& cfg, double sigma) {
    const LatentGrid z = encode(edit, cfg);
    require(z.shape() == world.shape(), ErrorKind::dimension_mismatch,
            "encoded edit " + to_string(z.shape()) + " does not match world " + to_string(world.shape()));
    return gmm_log_density(z, sigma, world) / static_cast<double>(z.size());
}

std::optional<double> boundary_smoothness(const Image& edit, const EditMap& mu, Band band) {
    require(band.lo >= 0.0 && band.lo < band.hi && band.hi <= 1.0, ErrorKind::invalid_argument,
            "band must satisfy 0 <= lo < hi <= 1");
    check_map(edit, mu);
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < edit.height(); ++y) {
        for (int x = 0; x < edit.width(); ++x) {
            const double m = mu.at(y, x);
            if (!(m > band.lo && m < band.hi)) {
                continue;
            }
            double g2 = 0.0;
            for (int c = 0; c < edit.channels(); ++c) {
                const double v = edit.at(c, y, x);
                const double dx = x + 1 < edit.width() ? edit.at(c, y, x + 1) - v : 0.0;
                const double dy = y + 1 < edit.height() ? edit.at(c, y + 1, x) - v : 0.0;
                g2 += dx * dx + dy * dy;
            }
            sum += g2 / edit.channels();
            ++count;
        }
    }
    if (count == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(count);
}

EditScore score_edit(const Image& edit, const Image& source, const Image& exemplar, const EditMap& mu,
                     const GmmWorld& world, const EncoderConfig& cfg, Band band) {
    return {adherence(edit, source, exemplar, mu), realism_proxy(edit, world, cfg),
            boundary_smoothness(edit, mu, band)};
}

nlohmann::json to_json(const EditScore& score) {
    // keys are emitted sorted, which keeps the CLI output order stable
    return {
        {"adherence_source", score.adherence.source},
        {"adherence_exemplar", score.adherence.exemplar},
        {"source_region_empty", score.adherence.source_empty},
        {"exemplar_region_empty", score.adherence.exemplar_empty},
        {"realism", score.realism},
        {"boundary_smoothness", score.boundary_smoothness ? nlohmann::json(*score.boundary_smoothness)
                                                          : nlohmann::json(nullptr)},
    };
}

}  // namespace progedit
