// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "progedit/error.hpp"

namespace progedit {

struct Shape {
    int channels = 0;
    int height = 0;
    int width = 0;

    std::size_t plane() const { return static_cast<std::size_t>(height) * width; }
    std::size_t size() const { return plane() * channels; }

    friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& shape);

// Dense C x H x W storage, channel-major. The tag keeps pixel-space images,
// latents and score fields from being mixed up at call sites.
template <typename Tag>
class Grid {
public:
    Grid() = default;

    explicit Grid(Shape shape, double fill = 0.0) : shape_(shape), values_(shape.size(), fill) {
        validate_shape(shape);
    }

    Grid(Shape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
        validate_shape(shape);
        require(values_.size() == shape_.size(), ErrorKind::dimension_mismatch,
                "grid value count " + std::to_string(values_.size()) + " does not match shape " +
                    to_string(shape_));
        for (double v : values_) {
            require(std::isfinite(v), ErrorKind::invalid_argument, "grid values must be finite");
        }
    }

    const Shape& shape() const { return shape_; }
    int channels() const { return shape_.channels; }
    int height() const { return shape_.height; }
    int width() const { return shape_.width; }
    std::size_t size() const { return values_.size(); }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    double& at(int c, int y, int x) { return values_[index(c, y, x)]; }
    double at(int c, int y, int x) const { return values_[index(c, y, x)]; }

    std::size_t index(int c, int y, int x) const {
        return (static_cast<std::size_t>(c) * shape_.height + y) * shape_.width + x;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    static void validate_shape(const Shape& shape) {
        require(shape.channels > 0 && shape.height > 0 && shape.width > 0,
                ErrorKind::invalid_argument, "grid dimensions must be positive, got " + to_string(shape));
    }

    Shape shape_;
    std::vector<double> values_;
};

struct ImageTag {};
struct LatentTag {};
struct ScoreTag {};

using Image = Grid<ImageTag>;
using LatentGrid = Grid<LatentTag>;
using ScoreField = Grid<ScoreTag>;

// Per-pixel edit strength in [0, 1]. Higher values keep the source longer.
class EditMap {
public:
    EditMap() = default;
    EditMap(int height, int width, double fill = 0.0);
    EditMap(int height, int width, std::vector<double> values);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return values_.size(); }

    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double at(int y, int x) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }

    // Clamps nothing: out-of-range values are rejected.
    void set(int y, int x, double value);

    friend bool operator==(const EditMap&, const EditMap&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<double> values_;
};

class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int height, int width, bool fill = false);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return values_.size(); }

    bool operator[](std::size_t i) const { return values_[i] != 0; }
    bool at(int y, int x) const { return values_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    void set(std::size_t i, bool value) { values_[i] = value ? 1 : 0; }

    std::size_t count() const;
    BinaryMask inverted() const;
    // True when every set element of *this is also set in other.
    bool subset_of(const BinaryMask& other) const;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint8_t> values_;
};

}  // namespace progedit
