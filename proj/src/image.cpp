// Copyright 2026 The woit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "woit/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace woit {

Image::Image(int width, int height, Spectrum3 fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Spectrum3 Image::sample_bilinear(double x, double y) const {
    x = std::clamp(x, 0.0, static_cast<double>(width_ - 1));
    y = std::clamp(y, 0.0, static_cast<double>(height_ - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double fx = x - x0;
    const double fy = y - y0;
    if (fx == 0.0 && fy == 0.0) {
        return at(x0, y0);
    }
    const int x1 = std::min(x0 + 1, width_ - 1);
    const int y1 = std::min(y0 + 1, height_ - 1);
    const Spectrum3 top = at(x0, y0) * (1.0 - fx) + at(x1, y0) * fx;
    const Spectrum3 bottom = at(x0, y1) * (1.0 - fx) + at(x1, y1) * fx;
    return top * (1.0 - fy) + bottom * fy;
}

std::uint8_t encode_gamma(double linear) {
    const double c = std::clamp(linear, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(255.0 * std::pow(c, 1.0 / 2.2)));
}

double decode_gamma(std::uint8_t code) { return std::pow(static_cast<double>(code) / 255.0, 2.2); }

std::vector<std::uint8_t> encode_bytes(const Image& image) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(image.pixels().size() * 3);
    for (const Spectrum3& p : image.pixels()) {
        bytes.push_back(encode_gamma(p.r));
        bytes.push_back(encode_gamma(p.g));
        bytes.push_back(encode_gamma(p.b));
    }
    return bytes;
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
    const std::vector<std::uint8_t> bytes = encode_bytes(image);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string token;
    int ch = 0;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch) != 0) {
            if (!token.empty()) {
                break;
            }
            continue;
        }
        token.push_back(static_cast<char>(ch));
    }
    return token;
}

}  // namespace

Image read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    if (next_token(in) != "P6") {
        throw std::runtime_error("'" + path.string() + "' is not a binary PPM (P6)");
    }
    int width = 0;
    int height = 0;
    int maxval = 0;
    try {
        width = std::stoi(next_token(in));
        height = std::stoi(next_token(in));
        maxval = std::stoi(next_token(in));
    } catch (const std::exception&) {
        throw std::runtime_error("malformed PPM header in '" + path.string() + "'");
    }
    if (maxval != 255) {
        throw std::runtime_error("only maxval 255 PPM files are supported");
    }
    Image image(width, height);
    std::vector<std::uint8_t> bytes(image.pixels().size() * 3);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
        throw std::runtime_error("truncated PPM data in '" + path.string() + "'");
    }
    for (std::size_t i = 0; i < image.pixels().size(); ++i) {
        image.pixels()[i] = {decode_gamma(bytes[3 * i]), decode_gamma(bytes[3 * i + 1]),
                             decode_gamma(bytes[3 * i + 2])};
    }
    return image;
}

}  // namespace woit
