// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/run_config.hpp"

#include <fstream>

#include "progedit/base64.hpp"
#include "progedit/fixtures.hpp"
#include "progedit/pixmap.hpp"

namespace progedit {

namespace {

std::string summarize(const std::vector<FieldError>& fields) {
    std::string out = "invalid run config";
    for (const auto& f : fields) {
        out += "; " + f.path + ": " + f.message;
    }
    return out;
}

class Collector {
public:
    // Runs fn, recording any failure under path. Returns false on failure.
    template <typename Fn>
    bool attempt(const std::string& path, Fn&& fn) {
        try {
            fn();
            return true;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::input_missing) {
                missing_ = true;
            }
            errors_.push_back({path, e.what()});
        } catch (const nlohmann::json::exception& e) {
            errors_.push_back({path, e.what()});
        }
        return false;
    }

    void add(const std::string& path, const std::string& message) { errors_.push_back({path, message}); }

    void raise_if_any() const {
        if (!errors_.empty()) {
            throw ConfigError(missing_ ? ErrorKind::input_missing : ErrorKind::invalid_argument, errors_);
        }
    }

private:
    std::vector<FieldError> errors_;
    bool missing_ = false;
};

std::filesystem::path resolve_path(const std::filesystem::path& base_dir, const std::string& ref) {
    const std::filesystem::path p(ref);
    return p.is_absolute() ? p : base_dir / p;
}

Image inline_image(const nlohmann::json& obj) {
    const int channels = obj.value("channels", 1);
    const int height = obj.at("height").get<int>();
    const int width = obj.at("width").get<int>();
    require(channels == 1 || channels == 3, ErrorKind::invalid_argument, "channels must be 1 or 3");
    return Image(Shape{channels, height, width}, obj.at("values").get<std::vector<double>>());
}

Image resolve_image(const nlohmann::json& ref, const ReferenceResolver& resolver) {
    if (ref.is_object()) {
        return inline_image(ref);
    }
    require(ref.is_string(), ErrorKind::invalid_argument, "expected an image reference string or object");
    return decode_pnm(resolver.read_bytes(ref.get<std::string>()));
}

EditMap resolve_map(const nlohmann::json& ref, const ReferenceResolver& resolver) {
    if (ref.is_object()) {
        const Image img = inline_image(ref);
        require(img.channels() == 1, ErrorKind::invalid_argument, "edit maps have one channel");
        return EditMap(img.height(), img.width(), std::vector<double>(img.values().begin(), img.values().end()));
    }
    require(ref.is_string(), ErrorKind::invalid_argument, "expected a map reference string or object");
    return decode_map_pgm(resolver.read_bytes(ref.get<std::string>()));
}

template <typename T>
void read_optional(const nlohmann::json& doc, const char* key, T& out, Collector& errors) {
    if (doc.contains(key)) {
        errors.attempt(key, [&] { out = doc.at(key).get<T>(); });
    }
}

}  // namespace

ConfigError::ConfigError(ErrorKind kind, std::vector<FieldError> fields)
    : Error(kind, summarize(fields)), fields_(std::move(fields)) {}

nlohmann::json to_json(const FieldError& e) {
    return {{"path", e.path}, {"message", e.message}};
}

std::vector<Exemplar> RunConfig::exemplar_pairs() const {
    std::vector<Exemplar> out;
    for (std::size_t i = 0; i < exemplars.size(); ++i) {
        out.emplace_back(exemplars[i], maps[i]);
    }
    return out;
}

ReferenceResolver file_resolver(const std::filesystem::path& base_dir) {
    ReferenceResolver r;
    r.read_bytes = [base_dir](const std::string& ref) {
        const std::filesystem::path p = resolve_path(base_dir, ref);
        require(std::filesystem::exists(p), ErrorKind::input_missing, "file not found: " + p.string());
        return read_file(p);
    };
    r.load_world = [base_dir](const std::string& ref) -> std::optional<GmmWorld> {
        const std::filesystem::path p = resolve_path(base_dir, ref);
        if (std::filesystem::exists(p)) {
            return world_from_json(load_json_file(p));
        }
        for (auto& w : fixtures::bundled_worlds()) {
            if (w.name == ref) {
                return std::move(w.world);
            }
        }
        return std::nullopt;
    };
    return r;
}

ReferenceResolver base64_resolver() {
    ReferenceResolver r;
    r.read_bytes = [](const std::string& ref) {
        auto bytes = base64_decode(ref);
        require(bytes.has_value(), ErrorKind::parse, "not valid base64");
        return std::move(*bytes);
    };
    r.load_world = [](const std::string& ref) -> std::optional<GmmWorld> {
        for (auto& w : fixtures::bundled_worlds()) {
            if (w.name == ref) {
                return std::move(w.world);
            }
        }
        return std::nullopt;
    };
    return r;
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::parse, "cannot parse '" + path.string() + "': " + e.what());
    }
}

RunConfig parse_run_config(const nlohmann::json& doc, const ReferenceResolver& resolver,
                           const ParseOptions& options) {
    RunConfig cfg;
    Collector errors;
    if (!doc.is_object()) {
        errors.add("", "run config must be a JSON object");
        errors.raise_if_any();
    }

    if (doc.contains("source")) {
        errors.attempt("source", [&] { cfg.source = resolve_image(doc.at("source"), resolver); });
    } else if (options.require_images) {
        errors.add("source", "missing required field");
    }

    const auto read_list = [&](const char* key, auto&& resolve, auto& out) {
        if (!doc.contains(key)) {
            if (options.require_images) {
                errors.add(key, "missing required field");
            }
            return;
        }
        const auto& arr = doc.at(key);
        if (!arr.is_array()) {
            errors.add(key, "must be an array");
            return;
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            errors.attempt(std::string(key) + "[" + std::to_string(i) + "]",
                           [&] { out.push_back(resolve(arr[i], resolver)); });
        }
    };
    read_list("exemplars", resolve_image, cfg.exemplars);
    read_list("maps", resolve_map, cfg.maps);
    if (doc.contains("exemplars") && doc.contains("maps") && doc.at("exemplars").is_array() &&
        doc.at("maps").is_array()) {
        if (doc.at("exemplars").size() != doc.at("maps").size()) {
            errors.add("maps", "needs exactly one map per exemplar");
        } else if (options.require_images && doc.at("exemplars").empty()) {
            errors.add("exemplars", "at least one exemplar is required");
        }
    }

    EditParams& p = cfg.params;
    read_optional(doc, "T", p.schedule.steps, errors);
    p.t_ds_max = p.schedule.steps;
    read_optional(doc, "t_ds_max", p.t_ds_max, errors);
    read_optional(doc, "sigma_min", p.schedule.sigma_min, errors);
    read_optional(doc, "sigma_max", p.schedule.sigma_max, errors);
    read_optional(doc, "seed", p.seed, errors);
    read_optional(doc, "retain_steps", p.retain_steps, errors);
    if (doc.contains("threshold")) {
        errors.attempt("threshold",
                       [&] { p.threshold = parse_threshold_kind(doc.at("threshold").get<std::string>()); });
    }
    if (doc.contains("mode")) {
        errors.attempt("mode", [&] { p.mode = parse_step_mode(doc.at("mode").get<std::string>()); });
    }
    if (doc.contains("conditioning")) {
        errors.attempt("conditioning", [&] {
            const auto& c = doc.at("conditioning");
            if (!c.is_null()) {
                auto subset = c.get<std::vector<std::size_t>>();
                require(!subset.empty(), ErrorKind::invalid_argument, "component subset must be nonempty");
                p.conditioning = Conditioning::components(std::move(subset));
            }
        });
    }
    errors.attempt("schedule", [&] { p.schedule.validate(); });
    errors.attempt("t_ds_max", [&] {
        require(p.t_ds_max >= 0 && p.t_ds_max <= p.schedule.steps, ErrorKind::out_of_range,
                "must lie in [0, T]");
    });

    if (doc.contains("encoder")) {
        errors.attempt("encoder", [&] {
            const auto& e = doc.at("encoder");
            cfg.encoder.kind = parse_encoder_kind(e.value("kind", std::string("identity")));
            cfg.encoder.factor = e.value("factor", 1);
            require(cfg.encoder.factor == 1 || cfg.encoder.factor == 2 || cfg.encoder.factor == 4,
                    ErrorKind::invalid_argument, "factor must be 1, 2 or 4");
        });
    }

    if (!doc.contains("world")) {
        errors.add("world", "missing required field");
    } else {
        errors.attempt("world", [&] {
            const auto& w = doc.at("world");
            if (w.is_object()) {
                cfg.world = std::make_shared<const GmmWorld>(world_from_json(w));
                return;
            }
            require(w.is_string(), ErrorKind::invalid_argument, "expected a world name, path or object");
            auto loaded = resolver.load_world(w.get<std::string>());
            require(loaded.has_value(), ErrorKind::input_missing, "unknown world '" + w.get<std::string>() + "'");
            cfg.world = std::make_shared<const GmmWorld>(std::move(*loaded));
        });
    }

    if (doc.contains("emit")) {
        errors.attempt("emit", [&] {
            const auto& e = doc.at("emit");
            cfg.emit.result = e.value("result", cfg.emit.result);
            cfg.emit.step_masks = e.value("step_masks", cfg.emit.step_masks);
            cfg.emit.step_latents = e.value("step_latents", cfg.emit.step_latents);
            cfg.emit.score_json = e.value("score_json", cfg.emit.score_json);
        });
    }
    if (doc.contains("bound")) {
        errors.attempt("bound", [&] {
            const auto& b = doc.at("bound");
            cfg.bound.t_ds = b.value("t_ds", cfg.bound.t_ds);
            cfg.bound.p_tail = b.value("p_tail", cfg.bound.p_tail);
            cfg.bound.n_runs = b.value("n_runs", cfg.bound.n_runs);
            cfg.bound.b_samples = b.value("b_samples", cfg.bound.b_samples);
        });
    }
    if (doc.contains("sweep")) {
        errors.attempt("sweep", [&] {
            const auto& s = doc.at("sweep");
            cfg.sweep.realism_floor = s.value("realism_floor", cfg.sweep.realism_floor);
            cfg.sweep.fixed_t_ds = s.value("fixed_t_ds", cfg.sweep.fixed_t_ds);
        });
    }
    errors.raise_if_any();

    // Cross-field shape checks once every piece parsed.
    if (cfg.source) {
        const Shape s = cfg.source->shape();
        for (std::size_t i = 0; i < cfg.exemplars.size(); ++i) {
            if (cfg.exemplars[i].shape() != s) {
                errors.add("exemplars[" + std::to_string(i) + "]", "dimensions differ from the source");
            }
        }
        for (std::size_t i = 0; i < cfg.maps.size(); ++i) {
            if (cfg.maps[i].height() != s.height || cfg.maps[i].width() != s.width) {
                errors.add("maps[" + std::to_string(i) + "]", "dimensions differ from the source");
            }
        }
        errors.attempt("encoder", [&] {
            const Shape latent = cfg.encoder.latent_shape(s);
            require(latent == cfg.world->shape(), ErrorKind::dimension_mismatch,
                    "latent " + to_string(latent) + " does not match world " + to_string(cfg.world->shape()));
        });
    }
    errors.raise_if_any();
    return cfg;
}

}  // namespace progedit
