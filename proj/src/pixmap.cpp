// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/pixmap.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

namespace progedit {

std::uint8_t quantize_unit(double v) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::round(clamped * 255.0));
}

namespace {

std::string header(char magic, int width, int height) {
    return std::string("P") + magic + "\n" + std::to_string(width) + " " + std::to_string(height) +
           "\n255\n";
}

class HeaderReader {
public:
    explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

    int next_int() {
        skip_space_and_comments();
        require(pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_])),
                ErrorKind::parse, "malformed netpbm header");
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            value = value * 10 + (bytes_[pos_] - '0');
            require(value < (1L << 24), ErrorKind::parse, "netpbm header value too large");
            ++pos_;
        }
        return static_cast<int>(value);
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_offset() {
        require(pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_])),
                ErrorKind::parse, "missing separator before raster");
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 2;
};

}  // namespace

std::string encode_pgm(const Image& img) {
    require(img.channels() == 1, ErrorKind::invalid_argument, "P5 output needs a single-channel image");
    std::string out = header('5', img.width(), img.height());
    out.reserve(out.size() + img.size());
    for (double v : img.values()) {
        out.push_back(static_cast<char>(quantize_unit(v)));
    }
    return out;
}

std::string encode_ppm(const Image& img) {
    require(img.channels() == 1 || img.channels() == 3, ErrorKind::invalid_argument,
            "P6 output needs 1 or 3 channels");
    std::string out = header('6', img.width(), img.height());
    out.reserve(out.size() + img.shape().plane() * 3);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                const int src = img.channels() == 1 ? 0 : c;
                out.push_back(static_cast<char>(quantize_unit(img.at(src, y, x))));
            }
        }
    }
    return out;
}

std::string encode_pnm(const Image& img) {
    return img.channels() == 1 ? encode_pgm(img) : encode_ppm(img);
}

std::string encode_mask_pgm(const BinaryMask& mask) {
    std::string out = header('5', mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        out.push_back(static_cast<char>(mask[i] ? 255 : 0));
    }
    return out;
}

std::string encode_map_pgm(const EditMap& mu) {
    std::string out = header('5', mu.width(), mu.height());
    for (double v : mu.values()) {
        out.push_back(static_cast<char>(quantize_unit(v)));
    }
    return out;
}

Image decode_pnm(std::string_view bytes) {
    require(bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6'),
            ErrorKind::parse, "expected a binary P5 or P6 netpbm file");
    const int channels = bytes[1] == '5' ? 1 : 3;
    HeaderReader reader(bytes);
    const int width = reader.next_int();
    const int height = reader.next_int();
    const int maxval = reader.next_int();
    require(width > 0 && height > 0, ErrorKind::parse, "netpbm dimensions must be positive");
    require(maxval == 255, ErrorKind::parse, "only 8-bit netpbm (maxval 255) is supported");
    const std::size_t offset = reader.raster_offset();
    const std::size_t plane = static_cast<std::size_t>(width) * height;
    require(bytes.size() - offset >= plane * channels, ErrorKind::parse, "netpbm raster is truncated");

    Image img(Shape{channels, height, width});
    for (std::size_t p = 0; p < plane; ++p) {
        for (int c = 0; c < channels; ++c) {
            const auto byte = static_cast<unsigned char>(bytes[offset + p * channels + c]);
            img[c * plane + p] = byte / 255.0;
        }
    }
    return img;
}

EditMap decode_map_pgm(std::string_view bytes) {
    const Image img = decode_pnm(bytes);
    require(img.channels() == 1, ErrorKind::parse, "edit maps must be P5 graymaps");
    return EditMap(img.height(), img.width(), std::vector<double>(img.values().begin(), img.values().end()));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::input_missing, "cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::invalid_argument, "cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Image read_image(const std::filesystem::path& path) {
    return decode_pnm(read_file(path));
}

EditMap read_edit_map(const std::filesystem::path& path) {
    return decode_map_pgm(read_file(path));
}

void write_image(const std::filesystem::path& path, const Image& img) {
    write_file(path, encode_pnm(img));
}

}  // namespace progedit
