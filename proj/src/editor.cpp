// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/editor.hpp"

#include <string>

#include "progedit/blend.hpp"

namespace progedit {

void EditParams::validate() const {
    schedule.validate();
    require(t_ds_max >= 0 && t_ds_max <= schedule.steps, ErrorKind::out_of_range,
            "t_ds_max " + std::to_string(t_ds_max) + " outside [0, " + std::to_string(schedule.steps) + "]");
    require(retain_cap >= 0, ErrorKind::invalid_argument, "retain_cap must be non-negative");
}

EditStreams::EditStreams(std::uint64_t seed)
    : init(named_stream(seed, "init")),
      source_noise(named_stream(seed, "source-noise")),
      stepper(named_stream(seed, "stepper")) {}

BinaryMask mask_at(const EditMap& mu_d, double threshold) {
    require(std::isfinite(threshold), ErrorKind::invalid_argument, "mask threshold must be finite");
    BinaryMask mask(mu_d.height(), mu_d.width());
    for (std::size_t i = 0; i < mu_d.size(); ++i) {
        mask.set(i, mu_d[i] > threshold);
    }
    return mask;
}

namespace {

struct Prepared {
    LatentGrid source;
    std::vector<LatentGrid> exemplars;
    std::vector<EditMap> maps;  // downsampled
};

Prepared prepare(const Image& x1, const std::vector<Exemplar>& exemplars, const EditParams& params,
                 const GmmWorld& world, const EncoderConfig& cfg) {
    params.validate();
    require(!exemplars.empty(), ErrorKind::invalid_argument, "at least one exemplar is required");
    Prepared p{encode(x1, cfg), {}, {}};
    require(world.shape() == p.source.shape(), ErrorKind::dimension_mismatch,
            "world shape " + to_string(world.shape()) + " does not match latent " + to_string(p.source.shape()));
    for (std::size_t j = 0; j < exemplars.size(); ++j) {
        const auto& [img, mu] = exemplars[j];
        require(img.shape() == x1.shape(), ErrorKind::dimension_mismatch,
                "exemplar " + std::to_string(j) + " is " + to_string(img.shape()) + ", source is " +
                    to_string(x1.shape()));
        require(mu.height() == x1.height() && mu.width() == x1.width(), ErrorKind::dimension_mismatch,
                "edit map " + std::to_string(j) + " does not match the source dimensions");
        p.exemplars.push_back(encode(img, cfg));
        p.maps.push_back(downsample_map(mu, cfg.effective_factor()));
    }
    return p;
}

class Recorder {
public:
    Recorder(EditResult& result, const EditParams& params) : result_(result), params_(params) {}

    void record(int t, const BinaryMask& mask, const LatentGrid& composed) {
        if (!params_.retain_steps) {
            return;
        }
        if (params_.retain_cap > 0 && static_cast<int>(result_.steps.size()) >= params_.retain_cap) {
            return;
        }
        result_.steps.push_back(t);
        result_.per_step_masks.push_back(mask);
        result_.per_step_latents.push_back(composed);
    }

private:
    EditResult& result_;
    const EditParams& params_;
};

LatentGrid noised_init(const LatentGrid& z, const EditParams& params, const EditStreams& streams) {
    RngStream shared = streams.init;
    return add_noise(z, params.t_ds_max, params.schedule, shared);
}

double loop_threshold(const EditParams& params, int t) {
    const int T = params.schedule.steps;
    return threshold_value(params.threshold, T - t, T);
}

EditResult finish(EditResult result, LatentGrid z, const EncoderConfig& cfg) {
    result.output = decode(z, cfg);
    result.latent = std::move(z);
    return result;
}

void notify(const StepObserver& observer, int index, int total) {
    if (observer) {
        observer(index, total);
    }
}

}  // namespace

EditResult progressive_edit(const Image& x1, const Image& x2, const EditMap& mu, const EditParams& params,
                            const GmmWorld& world, const EncoderConfig& cfg, const StepObserver& observer) {
    const Prepared prep = prepare(x1, {{x2, mu}}, params, world, cfg);
    const LatentGrid& z1 = prep.source;
    const EditMap& mu_d = prep.maps.front();
    const NoiseSchedule& sched = params.schedule;
    const int t_start = params.t_ds_max;

    EditResult result;
    result.params = params;
    result.executed_steps = t_start;
    Recorder recorder(result, params);
    EditStreams streams(params.seed);

    const BinaryMask init_mask = mask_at(mu_d, 0.0);
    LatentGrid z_mix =
        surgical_blend(noised_init(z1, params, streams), noised_init(prep.exemplars.front(), params, streams),
                       init_mask);
    recorder.record(t_start, init_mask, z_mix);
    if (t_start == 0) {
        result.degenerate = true;
        return finish(std::move(result), std::move(z_mix), cfg);
    }
    notify(observer, 0, t_start);
    z_mix = denoise_step(z_mix, t_start, sched, world, params.conditioning, params.mode, streams.stepper);

    for (int t = t_start - 1; t >= 1; --t) {
        const LatentGrid z1_t = add_noise(z1, t, sched, streams.source_noise);
        const BinaryMask mask = mask_at(mu_d, loop_threshold(params, t));
        z_mix = surgical_blend(z1_t, z_mix, mask);
        recorder.record(t, mask, z_mix);
        notify(observer, t_start - t, t_start);
        z_mix = denoise_step(z_mix, t, sched, world, params.conditioning, params.mode, streams.stepper);
    }
    return finish(std::move(result), std::move(z_mix), cfg);
}

EditResult progressive_edit_multi(const Image& x1, const std::vector<Exemplar>& exemplars,
                                  const EditParams& params, const GmmWorld& world, const EncoderConfig& cfg,
                                  const StepObserver& observer) {
    const Prepared prep = prepare(x1, exemplars, params, world, cfg);
    const NoiseSchedule& sched = params.schedule;
    const int t_start = params.t_ds_max;
    const std::size_t n = prep.exemplars.size();

    EditResult result;
    result.params = params;
    result.executed_steps = t_start;
    Recorder recorder(result, params);
    EditStreams streams(params.seed);

    // Elements that survive every nested layer come from the source.
    const auto source_mask = [](const std::vector<BinaryMask>& masks) {
        BinaryMask acc = masks.front();
        for (std::size_t j = 1; j < masks.size(); ++j) {
            for (std::size_t i = 0; i < acc.size(); ++i) {
                acc.set(i, acc[i] && masks[j][i]);
            }
        }
        return acc;
    };
    const auto masks_at = [&](double threshold) {
        std::vector<BinaryMask> masks;
        masks.reserve(n);
        for (const auto& mu_d : prep.maps) {
            masks.push_back(mask_at(mu_d, threshold));
        }
        return masks;
    };

    const LatentGrid z1_init = noised_init(prep.source, params, streams);
    std::vector<LatentGrid> noised_exemplars;
    noised_exemplars.reserve(n);
    for (const auto& z : prep.exemplars) {
        noised_exemplars.push_back(noised_init(z, params, streams));
    }
    std::vector<std::span<const double>> layers;
    for (const auto& z : noised_exemplars) {
        layers.push_back(z.values());
    }
    std::vector<BinaryMask> masks = masks_at(0.0);
    LatentGrid z_mix(prep.source.shape(), compose_nested<double>(z1_init.values(), layers, masks));
    recorder.record(t_start, source_mask(masks), z_mix);
    if (t_start == 0) {
        result.degenerate = true;
        return finish(std::move(result), std::move(z_mix), cfg);
    }
    notify(observer, 0, t_start);
    z_mix = denoise_step(z_mix, t_start, sched, world, params.conditioning, params.mode, streams.stepper);

    for (int t = t_start - 1; t >= 1; --t) {
        const LatentGrid z1_t = add_noise(prep.source, t, sched, streams.source_noise);
        masks = masks_at(loop_threshold(params, t));
        const std::vector<std::span<const double>> residue(n, z_mix.values());
        z_mix = LatentGrid(z_mix.shape(), compose_nested<double>(z1_t.values(), residue, masks));
        recorder.record(t, source_mask(masks), z_mix);
        notify(observer, t_start - t, t_start);
        z_mix = denoise_step(z_mix, t, sched, world, params.conditioning, params.mode, streams.stepper);
    }
    return finish(std::move(result), std::move(z_mix), cfg);
}

EditResult iterative_edit(const Image& x1, const std::vector<Exemplar>& passes, const EditParams& params,
                          const GmmWorld& world, const EncoderConfig& cfg, const StepObserver& observer) {
    require(!passes.empty(), ErrorKind::invalid_argument, "at least one pass is required");
    Image source = x1;
    EditResult result;
    for (std::size_t i = 0; i < passes.size(); ++i) {
        EditParams pass_params = params;
        if (i > 0) {
            pass_params.seed = mix_seed(params.seed, i);
        }
        result = progressive_edit(source, passes[i].first, passes[i].second, pass_params, world, cfg, observer);
        source = result.output;
    }
    result.params = params;
    return result;
}

EditResult img2img(const Image& x, const EditParams& params, const GmmWorld& world, const EncoderConfig& cfg) {
    params.validate();
    const LatentGrid z = encode(x, cfg);
    require(world.shape() == z.shape(), ErrorKind::dimension_mismatch, "world shape does not match latent");
    EditStreams streams(params.seed);
    EditResult result;
    result.params = params;
    result.executed_steps = params.t_ds_max;
    result.degenerate = params.t_ds_max == 0;
    LatentGrid out = full_reverse(noised_init(z, params, streams), params.t_ds_max, params.schedule, world,
                                  params.conditioning, params.mode, streams.stepper);
    return finish(std::move(result), std::move(out), cfg);
}

EditResult naive_blend_baseline(const Image& x1, const Image& x2, const EditMap& mu, const EditParams& params,
                                const GmmWorld& world, const EncoderConfig& cfg, const StepObserver& observer) {
    const Prepared prep = prepare(x1, {{x2, mu}}, params, world, cfg);
    const int t_start = params.t_ds_max;
    EditResult result;
    result.params = params;
    result.executed_steps = t_start;
    result.degenerate = t_start == 0;
    Recorder recorder(result, params);
    EditStreams streams(params.seed);

    const BinaryMask mask = mask_at(prep.maps.front(), 0.5);
    LatentGrid z = surgical_blend(noised_init(prep.source, params, streams),
                                  noised_init(prep.exemplars.front(), params, streams), mask);
    for (int t = t_start; t >= 1; --t) {
        recorder.record(t, mask, z);
        notify(observer, t_start - t, t_start);
        z = denoise_step(z, t, params.schedule, world, params.conditioning, params.mode, streams.stepper);
    }
    if (t_start == 0) {
        recorder.record(0, mask, z);
    }
    return finish(std::move(result), std::move(z), cfg);
}

EditResult spatial_noise_baseline(const Image& x1, const Image& x2, const EditMap& mu,
                                  const EditParams& params, const GmmWorld& world, const EncoderConfig& cfg,
                                  const StepObserver& observer) {
    const Prepared prep = prepare(x1, {{x2, mu}}, params, world, cfg);
    const EditMap& mu_d = prep.maps.front();
    const NoiseSchedule& sched = params.schedule;
    const int t_start = params.t_ds_max;

    EditResult result;
    result.params = params;
    result.executed_steps = t_start;
    Recorder recorder(result, params);
    EditStreams streams(params.seed);

    std::vector<double> inv(mu_d.size());
    for (std::size_t i = 0; i < inv.size(); ++i) {
        inv[i] = 1.0 - mu_d[i];
    }
    const EditMap noise_scale(mu_d.height(), mu_d.width(), std::move(inv));
    const BinaryMask mask = mask_at(mu_d, 0.5);

    RngStream init_source = streams.init;
    LatentGrid z_mix = surgical_blend(add_scaled_noise(prep.source, t_start, sched, noise_scale, init_source),
                                      noised_init(prep.exemplars.front(), params, streams), mask);
    recorder.record(t_start, mask, z_mix);
    if (t_start == 0) {
        result.degenerate = true;
        return finish(std::move(result), std::move(z_mix), cfg);
    }
    notify(observer, 0, t_start);
    z_mix = denoise_step(z_mix, t_start, sched, world, params.conditioning, params.mode, streams.stepper);

    for (int t = t_start - 1; t >= 1; --t) {
        const LatentGrid z1_t = add_scaled_noise(prep.source, t, sched, noise_scale, streams.source_noise);
        z_mix = surgical_blend(z1_t, z_mix, mask);
        recorder.record(t, mask, z_mix);
        notify(observer, t_start - t, t_start);
        z_mix = denoise_step(z_mix, t, sched, world, params.conditioning, params.mode, streams.stepper);
    }
    return finish(std::move(result), std::move(z_mix), cfg);
}

}  // namespace progedit
