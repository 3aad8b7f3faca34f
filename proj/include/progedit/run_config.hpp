// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "progedit/bounds.hpp"
#include "progedit/codec.hpp"
#include "progedit/editor.hpp"
#include "progedit/gmm.hpp"
#include "progedit/grid.hpp"

namespace progedit {

struct FieldError {
    std::string path;
    std::string message;
};

class ConfigError : public Error {
public:
    ConfigError(ErrorKind kind, std::vector<FieldError> fields);

    const std::vector<FieldError>& fields() const { return fields_; }

private:
    std::vector<FieldError> fields_;
};

nlohmann::json to_json(const FieldError& e);

struct EmitFlags {
    bool result = true;
    bool step_masks = false;
    bool step_latents = false;
    bool score_json = false;
};

struct BoundSettings {
    int t_ds = 25;
    double p_tail = 0.1;
    int n_runs = 1000;
    int b_samples = 16;
};

struct SweepSettings {
    double realism_floor = 1.5;
    int fixed_t_ds = -1;  // -1: round(0.2 * T)
};

// Parsed run-config document:
//   {source, exemplars[], maps[], T, t_ds_max, threshold, mode, seed, world,
//    encoder, retain_steps}
// plus optional sigma_min, sigma_max, conditioning, emit, bound, sweep.
struct RunConfig {
    std::optional<Image> source;
    std::vector<Image> exemplars;
    std::vector<EditMap> maps;
    EditParams params;
    std::shared_ptr<const GmmWorld> world;
    EncoderConfig encoder;
    EmitFlags emit;
    BoundSettings bound;
    SweepSettings sweep;

    std::vector<Exemplar> exemplar_pairs() const;
};

// Resolves an image or map reference. CLI references are file paths relative
// to the config; service references are base64-encoded pixmaps. Either may
// also be an inline object {channels?, height, width, values}.
struct ReferenceResolver {
    std::function<std::string(const std::string&)> read_bytes;  // reference -> netpbm bytes
    std::function<std::optional<GmmWorld>(const std::string&)> load_world;
};

ReferenceResolver file_resolver(const std::filesystem::path& base_dir);
ReferenceResolver base64_resolver();

struct ParseOptions {
    bool require_images = true;
};

// Throws ConfigError listing every invalid field.
RunConfig parse_run_config(const nlohmann::json& doc, const ReferenceResolver& resolver,
                           const ParseOptions& options = {});

nlohmann::json load_json_file(const std::filesystem::path& path);

}  // namespace progedit
