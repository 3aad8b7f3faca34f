// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "progedit/grid.hpp"

namespace progedit {

// Binary netpbm codecs: P5 (8-bit graymap) and P6 (8-bit pixmap).
// Pixel values map linearly [0,1] <-> [0,255]; writers clamp to [0,1] and
// round half away from zero.

std::uint8_t quantize_unit(double v);

std::string encode_pgm(const Image& img);  // channels must be 1
std::string encode_ppm(const Image& img);  // 1 or 3 channels; gray is replicated
std::string encode_pnm(const Image& img);  // P5 for 1 channel, P6 for 3
std::string encode_mask_pgm(const BinaryMask& mask);
std::string encode_map_pgm(const EditMap& mu);

Image decode_pnm(std::string_view bytes);
EditMap decode_map_pgm(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

Image read_image(const std::filesystem::path& path);
EditMap read_edit_map(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const Image& img);

}  // namespace progedit
