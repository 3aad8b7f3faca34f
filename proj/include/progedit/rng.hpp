// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace progedit {

// Seeded standard-normal stream. Copies are independent and replay the
// same sequence from the point of the copy.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed), seed_material_(seed) {}

    double gaussian() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::uint64_t bits() { return engine_(); }

    // Child stream keyed by name; does not advance this stream.
    RngStream derive(std::string_view name) const;

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::uint64_t seed_material_;
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
std::uint64_t fnv1a64(std::string_view bytes);

// Stream derived from (root_seed, name) only; independent of any other
// stream's consumption.
RngStream named_stream(std::uint64_t root_seed, std::string_view name);

}  // namespace progedit
