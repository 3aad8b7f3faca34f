// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/grid.hpp"

#include <algorithm>

namespace progedit {

std::string to_string(const Shape& shape) {
    return std::to_string(shape.channels) + "x" + std::to_string(shape.height) + "x" +
           std::to_string(shape.width);
}

namespace {

void check_map_value(double v) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, ErrorKind::out_of_range,
            "edit map values must lie in [0, 1], got " + std::to_string(v));
}

}  // namespace

EditMap::EditMap(int height, int width, double fill)
    : height_(height), width_(width) {
    require(height > 0 && width > 0, ErrorKind::invalid_argument, "edit map dimensions must be positive");
    check_map_value(fill);
    values_.assign(static_cast<std::size_t>(height) * width, fill);
}

EditMap::EditMap(int height, int width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
    require(height > 0 && width > 0, ErrorKind::invalid_argument, "edit map dimensions must be positive");
    require(values_.size() == static_cast<std::size_t>(height) * width, ErrorKind::dimension_mismatch,
            "edit map value count does not match its dimensions");
    std::for_each(values_.begin(), values_.end(), check_map_value);
}

void EditMap::set(int y, int x, double value) {
    check_map_value(value);
    values_[static_cast<std::size_t>(y) * width_ + x] = value;
}

BinaryMask::BinaryMask(int height, int width, bool fill)
    : height_(height), width_(width),
      values_(static_cast<std::size_t>(height) * width, fill ? 1 : 0) {
    require(height > 0 && width > 0, ErrorKind::invalid_argument, "mask dimensions must be positive");
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::inverted() const {
    BinaryMask out = *this;
    for (auto& v : out.values_) {
        v = v ? 0 : 1;
    }
    return out;
}

bool BinaryMask::subset_of(const BinaryMask& other) const {
    require(height_ == other.height_ && width_ == other.width_, ErrorKind::dimension_mismatch,
            "mask dimensions differ");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] && !other.values_[i]) {
            return false;
        }
    }
    return true;
}

}  // namespace progedit
