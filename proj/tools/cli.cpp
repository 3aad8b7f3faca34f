// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "progedit/blend.hpp"
#include "progedit/bounds.hpp"
#include "progedit/editor.hpp"
#include "progedit/fixtures.hpp"
#include "progedit/metrics.hpp"
#include "progedit/pixmap.hpp"
#include "progedit/run_config.hpp"

namespace progedit::cli {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    int workers = 1;
};

// Collects written artifacts so the manifest can list them.
class OutputDir {
public:
    explicit OutputDir(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    void write(const std::string& name, std::string_view bytes) {
        write_file(dir_ / name, bytes);
        names_.insert(name);
    }

    void write_json(const std::string& name, const nlohmann::json& doc) { write(name, doc.dump(2) + "\n"); }

    void write_manifest(const std::string& command, const nlohmann::json& config, std::uint64_t seed) {
        char hash[32];
        std::snprintf(hash, sizeof hash, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(config.dump())));
        nlohmann::json manifest = {
            {"tool", "progedit"},
            {"version", kToolVersion},
            {"command", command},
            {"config_hash", std::string("fnv1a64:") + hash},
            {"seed", seed},
            {"artifacts", std::vector<std::string>(names_.begin(), names_.end())},
        };
        write_file(dir_ / "manifest.json", manifest.dump(2) + "\n");
    }

private:
    fs::path dir_;
    std::set<std::string> names_;
};

std::string step_name(const char* prefix, int t, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_t%04d.%s", prefix, t, ext);
    return buf;
}

const char* image_ext(const Image& img) {
    return img.channels() == 1 ? "pgm" : "ppm";
}

struct LoadedConfig {
    nlohmann::json doc;
    RunConfig run;
};

LoadedConfig load_config(const CommonOptions& opts, const ParseOptions& parse = {}) {
    require(!opts.config.empty(), ErrorKind::invalid_argument, "--config is required");
    const fs::path path(opts.config);
    require(fs::exists(path), ErrorKind::input_missing, "config not found: " + path.string());
    LoadedConfig loaded;
    loaded.doc = load_json_file(path);
    if (opts.seed) {
        loaded.doc["seed"] = *opts.seed;
    }
    loaded.run = parse_run_config(loaded.doc, file_resolver(path.parent_path()), parse);
    return loaded;
}

LatentGrid masked(const LatentGrid& z, const BinaryMask& mask, bool keep_set) {
    LatentGrid out = z;
    const std::size_t plane = mask.size();
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (mask[i % plane] != keep_set) {
            out[i] = 0.0;
        }
    }
    return out;
}

void write_edit_outputs(OutputDir& dir, const RunConfig& run, const EditResult& result) {
    if (run.emit.result) {
        dir.write(std::string("result.") + image_ext(result.output), encode_pnm(result.output));
    }
    for (std::size_t j = 0; j < result.steps.size(); ++j) {
        if (run.emit.step_masks) {
            dir.write(step_name("mask", result.steps[j], "pgm"), encode_mask_pgm(result.per_step_masks[j]));
        }
        if (run.emit.step_latents) {
            const Image img = decode(result.per_step_latents[j], run.encoder);
            dir.write(step_name("latent", result.steps[j], image_ext(img)), encode_pnm(img));
        }
    }
    if (run.emit.score_json) {
        const EditScore score = score_edit(result.output, *run.source, run.exemplars.front(), run.maps.front(),
                                           *run.world, run.encoder);
        nlohmann::json doc = to_json(score);
        doc["degenerate"] = result.degenerate;
        doc["executed_steps"] = result.executed_steps;
        dir.write_json("score.json", doc);
    }
}

EditParams effective_params(const RunConfig& run) {
    EditParams p = run.params;
    p.retain_steps = p.retain_steps || run.emit.step_masks || run.emit.step_latents;
    return p;
}

int cmd_edit(const CommonOptions& opts, const std::string& command, const std::string& baseline) {
    const LoadedConfig cfg = load_config(opts);
    const RunConfig& run = cfg.run;
    const EditParams params = effective_params(run);
    EditResult result;
    if (command == "edit") {
        require(run.exemplars.size() == 1, ErrorKind::invalid_argument,
                "edit takes exactly one exemplar; use multi-edit or iterate for more");
        result = progressive_edit(*run.source, run.exemplars[0], run.maps[0], params, *run.world, run.encoder);
    } else if (command == "multi-edit") {
        result = progressive_edit_multi(*run.source, run.exemplar_pairs(), params, *run.world, run.encoder);
    } else if (command == "iterate") {
        result = iterative_edit(*run.source, run.exemplar_pairs(), params, *run.world, run.encoder);
    } else {
        require(run.exemplars.size() == 1, ErrorKind::invalid_argument, "baselines take exactly one exemplar");
        if (baseline == "naive") {
            result = naive_blend_baseline(*run.source, run.exemplars[0], run.maps[0], params, *run.world,
                                          run.encoder);
        } else {
            result = spatial_noise_baseline(*run.source, run.exemplars[0], run.maps[0], params, *run.world,
                                            run.encoder);
        }
    }
    OutputDir dir(opts.out);
    write_edit_outputs(dir, run, result);
    dir.write_manifest(baseline.empty() ? command : command + " " + baseline, cfg.doc, params.seed);
    return kSuccess;
}

int cmd_schedule_viz(const CommonOptions& opts) {
    const LoadedConfig cfg = load_config(opts);
    const RunConfig& run = cfg.run;
    EditParams params = run.params;
    params.retain_steps = true;
    const EditResult result =
        run.exemplars.size() == 1
            ? progressive_edit(*run.source, run.exemplars[0], run.maps[0], params, *run.world, run.encoder)
            : progressive_edit_multi(*run.source, run.exemplar_pairs(), params, *run.world, run.encoder);

    OutputDir dir(opts.out);
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t j = 0; j < result.steps.size(); ++j) {
        const int t = result.steps[j];
        const BinaryMask& mask = result.per_step_masks[j];
        const LatentGrid& z = result.per_step_latents[j];
        const Image from_source = decode(masked(z, mask, true), run.encoder);
        const Image from_residue = decode(masked(z, mask, false), run.encoder);
        dir.write(step_name("mask", t, "pgm"), encode_mask_pgm(mask));
        dir.write(step_name("viz_source", t, image_ext(from_source)), encode_pnm(from_source));
        dir.write(step_name("viz_residue", t, image_ext(from_residue)), encode_pnm(from_residue));
        steps.push_back({{"t", t}, {"mask_area", mask.count()}});
    }
    dir.write(std::string("result.") + image_ext(result.output), encode_pnm(result.output));
    dir.write_json("schedule.json", {{"threshold", to_string(params.threshold)},
                                     {"T", params.schedule.steps},
                                     {"t_ds_max", params.t_ds_max},
                                     {"steps", steps}});
    dir.write_manifest("schedule-viz", cfg.doc, params.seed);
    return kSuccess;
}

int cmd_bound_check(const CommonOptions& opts, const std::string& world_path, std::ostream& out) {
    LoadedConfig cfg = load_config(opts, ParseOptions{.require_images = false});
    RunConfig& run = cfg.run;
    if (!world_path.empty()) {
        require(fs::exists(world_path), ErrorKind::input_missing, "world not found: " + world_path);
        run.world = std::make_shared<const GmmWorld>(world_from_json(load_json_file(world_path)));
        cfg.doc["world_file_hash"] = fnv1a64(read_file(world_path));
    }
    const GmmWorld& world = *run.world;

    LatentGrid z_surgical(world.shape());
    std::string surgical_origin;
    if (run.source && !run.exemplars.empty()) {
        const LatentGrid z1 = encode(*run.source, run.encoder);
        const LatentGrid z2 = encode(run.exemplars[0], run.encoder);
        require(z1.shape() == world.shape(), ErrorKind::dimension_mismatch, "latent does not match world");
        const EditMap mu_d = downsample_map(run.maps[0], run.encoder.effective_factor());
        z_surgical = surgical_blend(z1, z2, mask_at(mu_d, 0.5));
        surgical_origin = "surgical blend of source and exemplars[0] through mu_d > 0.5";
    } else {
        const auto& mean = world.components().front().mean;
        z_surgical = LatentGrid(world.shape(), mean);
        surgical_origin = "mean of world component 0";
    }

    BoundCheckOptions options;
    options.p_tail = run.bound.p_tail;
    options.n_runs = run.bound.n_runs;
    options.b_samples = run.bound.b_samples;
    options.conditioning = run.params.conditioning;
    options.workers = opts.workers;
    const BoundReport report = verify_bound(world, z_surgical, run.bound.t_ds, run.params.schedule, options,
                                            named_stream(run.params.seed, "bound-check"));

    const double p = options.p_tail;
    const double floor = (1.0 - p) - 3.0 * std::sqrt(p * (1.0 - p) / options.n_runs);
    nlohmann::json doc = to_json(report);
    doc["surgical_latent"] = surgical_origin;
    doc["coverage_floor"] = floor;
    doc["passes"] = report.empirical_coverage >= floor;

    OutputDir dir(opts.out);
    dir.write_json("bound_report.json", doc);
    dir.write_manifest("bound-check", cfg.doc, run.params.seed);
    out << doc.dump(2) << "\n";
    return report.empirical_coverage >= floor ? kSuccess : kCheckFailed;
}

int cmd_sweep_tds(const CommonOptions& opts) {
    const LoadedConfig cfg = load_config(opts);
    const RunConfig& run = cfg.run;
    const int T = run.params.schedule.steps;
    const int fixed_t = run.sweep.fixed_t_ds >= 0 ? run.sweep.fixed_t_ds : static_cast<int>(std::lround(0.2 * T));
    require(fixed_t <= T, ErrorKind::out_of_range, "sweep.fixed_t_ds exceeds T");

    struct Row {
        std::string setting;
        std::size_t exemplar;
        double distance;
        int t_ds;
        bool reached;
        Adherence adherence;
        double realism;
    };
    const std::size_t n = run.exemplars.size();
    std::vector<std::vector<Row>> rows(n);
    const LatentGrid z1 = encode(*run.source, run.encoder);

    const auto evaluate = [&](std::size_t i) {
        const Image& x2 = run.exemplars[i];
        const EditMap& mu = run.maps[i];
        const double distance = latent_distance(z1, encode(x2, run.encoder));
        EditParams params = run.params;
        params.retain_steps = false;
        const TdsRecommendation rec =
            recommend_tds(*run.source, x2, mu, *run.world, run.encoder, run.sweep.realism_floor, params);
        for (const auto& [setting, t] : {std::pair<std::string, int>{"recommended", rec.t_ds},
                                         std::pair<std::string, int>{"fixed", fixed_t}}) {
            params.t_ds_max = t;
            const EditResult r = progressive_edit(*run.source, x2, mu, params, *run.world, run.encoder);
            const double realism = realism_proxy(r.output, *run.world, run.encoder, params.schedule.sigma_min);
            const bool reached = setting == "recommended" ? rec.reached : realism >= run.sweep.realism_floor;
            rows[i].push_back({setting, i, distance, t, reached, adherence(r.output, *run.source, x2, mu), realism});
        }
    };
    const int workers = std::clamp(opts.workers, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            evaluate(i);
        }
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = static_cast<std::size_t>(w); i < n; i += workers) {
                    evaluate(i);
                }
            });
        }
    }

    std::ostringstream csv;
    csv.precision(17);
    csv << "setting,exemplar,latent_distance,t_ds,reached,adherence_source,adherence_exemplar,realism\n";
    for (const auto& per_exemplar : rows) {
        for (const Row& r : per_exemplar) {
            csv << r.setting << ',' << r.exemplar << ',' << r.distance << ',' << r.t_ds << ','
                << (r.reached ? 1 : 0) << ',' << r.adherence.source << ',' << r.adherence.exemplar << ','
                << r.realism << '\n';
        }
    }
    OutputDir dir(opts.out);
    dir.write("sweep.csv", csv.str());
    dir.write_manifest("sweep-tds", cfg.doc, run.params.seed);
    return kSuccess;
}

// Writes the bundled fixture images, maps, worlds and ready-to-run configs.
int cmd_fixtures(const std::string& out_dir) {
    OutputDir dir(out_dir);
    const EncoderConfig enc = fixtures::encoder();
    dir.write("source.pgm", encode_pnm(fixtures::texture_a()));
    dir.write("exemplar.pgm", encode_pnm(fixtures::texture_b()));
    dir.write("ramp.pgm", encode_map_pgm(fixtures::ramp_map()));
    dir.write("ones.pgm", encode_map_pgm(EditMap(fixtures::kImageSize, fixtures::kImageSize, 1.0)));
    const auto alphas = fixtures::ladder_alphas();
    std::vector<std::string> ladder;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const std::string name = "ladder" + std::to_string(i) + ".pgm";
        dir.write(name, encode_pnm(fixtures::ladder_exemplar(alphas[i])));
        ladder.push_back(name);
    }
    for (const auto& w : fixtures::bundled_worlds()) {
        dir.write_json("world-" + w.name + ".json", to_json(w.world));
    }
    const nlohmann::json encoder = {{"kind", to_string(enc.kind)}, {"factor", enc.factor}};
    const nlohmann::json edit = {
        {"source", "source.pgm"}, {"exemplars", {"exemplar.pgm"}}, {"maps", {"ramp.pgm"}},
        {"T", 50}, {"t_ds_max", 50}, {"threshold", "linear"}, {"mode", "ancestral"}, {"seed", 7},
        {"world", "two-texture"}, {"encoder", encoder}, {"retain_steps", true},
        {"emit", {{"result", true}, {"step_masks", true}, {"score_json", true}}},
    };
    dir.write_json("edit.json", edit);
    nlohmann::json multi = edit;
    multi["exemplars"] = {"exemplar.pgm", "ladder1.pgm"};
    multi["maps"] = {"ramp.pgm", "ones.pgm"};
    dir.write_json("multi.json", multi);
    nlohmann::json sweep = edit;
    sweep["world"] = "texture-a";
    sweep["exemplars"] = ladder;
    sweep["maps"] = std::vector<std::string>(ladder.size(), "ramp.pgm");
    sweep["sweep"] = {{"realism_floor", 1.5}, {"fixed_t_ds", 10}};
    dir.write_json("sweep.json", sweep);
    nlohmann::json bound = {
        {"source", "source.pgm"}, {"exemplars", {"ladder0.pgm"}}, {"maps", {"ramp.pgm"}},
        {"T", 50}, {"seed", 11}, {"world", "single-gaussian"}, {"encoder", encoder},
        {"bound", {{"t_ds", 25}, {"p_tail", 0.1}, {"n_runs", 1000}, {"b_samples", 16}}},
    };
    dir.write_json("bound.json", bound);
    dir.write_manifest("fixtures", nlohmann::json::object(), 0);
    return kSuccess;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message,
                  const std::vector<FieldError>& fields = {}) {
    nlohmann::json e = {{"kind", kind}, {"message", message}};
    if (!fields.empty()) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& f : fields) {
            list.push_back(to_json(f));
        }
        e["fields"] = list;
    }
    err << nlohmann::json{{"error", e}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"progedit: progressive exemplar-driven editing over analytic score worlds", "progedit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    CommonOptions opts;
    std::string baseline_kind;
    std::string world_path;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "run-config JSON")->required();
        sub->add_option("--out", opts.out, "output directory");
        sub->add_option("--seed", opts.seed, "override the config seed");
        sub->add_option("--workers", opts.workers, "worker threads")->check(CLI::PositiveNumber);
    };

    auto* edit = app.add_subcommand("edit", "progressive edit with one exemplar");
    auto* multi = app.add_subcommand("multi-edit", "single-pass edit with any number of exemplars");
    auto* iterate = app.add_subcommand("iterate", "one progressive pass per exemplar");
    auto* baseline = app.add_subcommand("baseline", "naive or spatial-noise baseline");
    auto* viz = app.add_subcommand("schedule-viz", "per-step source/residue decomposition");
    auto* bound = app.add_subcommand("bound-check", "Monte-Carlo coverage of the adherence bound");
    auto* sweep = app.add_subcommand("sweep-tds", "denoising-strength recommendation sweep");
    auto* fixtures_cmd = app.add_subcommand("fixtures", "write bundled fixtures and example configs");
    for (auto* sub : {edit, multi, iterate, baseline, viz, bound, sweep}) {
        add_common(sub);
    }
    baseline->add_option("kind", baseline_kind, "naive | spatial-noise")
        ->required()
        ->check(CLI::IsMember({"naive", "spatial-noise"}));
    bound->add_option("--world", world_path, "world JSON overriding the config world");
    std::string fixtures_out = "fixtures";
    fixtures_cmd->add_option("--out", fixtures_out, "output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        report_error(err, "usage", e.what());
        return kInputError;
    }

    try {
        if (edit->parsed()) {
            return cmd_edit(opts, "edit", "");
        }
        if (multi->parsed()) {
            return cmd_edit(opts, "multi-edit", "");
        }
        if (iterate->parsed()) {
            return cmd_edit(opts, "iterate", "");
        }
        if (baseline->parsed()) {
            return cmd_edit(opts, "baseline", baseline_kind);
        }
        if (viz->parsed()) {
            return cmd_schedule_viz(opts);
        }
        if (bound->parsed()) {
            return cmd_bound_check(opts, world_path, out);
        }
        if (sweep->parsed()) {
            return cmd_sweep_tds(opts);
        }
        return cmd_fixtures(fixtures_out);
    } catch (const ConfigError& e) {
        report_error(err, std::string(to_string(e.kind())), e.what(), e.fields());
    } catch (const Error& e) {
        report_error(err, std::string(to_string(e.kind())), e.what());
    } catch (const std::exception& e) {
        report_error(err, "io", e.what());
    }
    return kInputError;
}

}  // namespace progedit::cli
