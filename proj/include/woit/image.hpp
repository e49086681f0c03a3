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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "woit/core.hpp"

namespace woit {

/// Linear-radiance RGB image, row-major, origin top-left.
class Image {
public:
    Image() = default;
    Image(int width, int height, Spectrum3 fill = {});

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pixels_.empty(); }

    Spectrum3& at(int x, int y) { return pixels_[index(x, y)]; }
    const Spectrum3& at(int x, int y) const { return pixels_[index(x, y)]; }

    std::span<Spectrum3> pixels() { return pixels_; }
    std::span<const Spectrum3> pixels() const { return pixels_; }

    /// Bilinear sample where integer coordinates are pixel centres; clamps
    /// at the edges.
    Spectrum3 sample_bilinear(double x, double y) const;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Spectrum3> pixels_;
};

/// 8-bit encoding used for PPM output: clamp to [0, 1], then c^(1/2.2).
std::uint8_t encode_gamma(double linear);
double decode_gamma(std::uint8_t code);

/// Binary P6, maxval 255, gamma-2.2 encoded. Throws std::runtime_error on
/// I/O failure.
void write_ppm(const std::filesystem::path& path, const Image& image);

/// Reads a binary P6 file (maxval 255) back into linear radiance.
Image read_ppm(const std::filesystem::path& path);

/// Encoded bytes of `image` as write_ppm would store them (no header).
std::vector<std::uint8_t> encode_bytes(const Image& image);

}  // namespace woit
