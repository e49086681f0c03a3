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

#include "woit/wavelet.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

namespace woit {

namespace {

double clamp_domain(double z) { return std::clamp(z, 0.0, kMaxNormalizedDepth); }

int level_offset(int level, double z) {
    const int cells = 1 << level;
    return std::min(static_cast<int>(std::floor(std::ldexp(z, level))), cells - 1);
}

void atomic_add(double& target, double delta) {
    std::atomic_ref<double> ref(target);
    double expected = ref.load(std::memory_order_relaxed);
    while (!ref.compare_exchange_weak(expected, expected + delta, std::memory_order_relaxed)) {
    }
}

template <typename AddFn>
int accumulate_interface(WaveletBuffer& buffer, double z, const Spectrum3& a, AddFn add) {
    z = clamp_domain(z);
    for (std::size_t c = 0; c < 3; ++c) {
        add(buffer[0][c], a[c] * (1.0 - z));
    }
    for (int n = 0; n <= buffer.rank(); ++n) {
        const int k = level_offset(n, z);
        const double psi = psi_integral(n, k, z);
        Spectrum3& slot = buffer[coefficient_index(n, k)];
        for (std::size_t c = 0; c < 3; ++c) {
            add(slot[c], -a[c] * psi);
        }
    }
    return buffer.rank() + 2;
}

}  // namespace

WaveletBuffer::WaveletBuffer(int rank) : rank_(rank) {
    if (rank < 0 || rank > kMaxRank) {
        throw std::invalid_argument("wavelet rank must be in [0, " + std::to_string(kMaxRank) + "]");
    }
    coeffs_.assign(coefficient_count(rank), Spectrum3{});
}

void WaveletBuffer::clear() { std::fill(coeffs_.begin(), coeffs_.end(), Spectrum3{}); }

double normalize_depth(double x, const DepthBounds& bounds) {
    if (bounds.empty()) {
        throw std::domain_error("no transparent coverage at pixel");
    }
    const double pad = std::max(1e-4 * (bounds.far() - bounds.near()), 1e-6);
    const double lo = bounds.near() - pad;
    const double hi = bounds.far() + pad;
    return std::clamp((x - lo) / (hi - lo), 0.0, kMaxNormalizedDepth);
}

double wavelet_depth(double x, const DepthBounds& bounds, int rank) {
    const double cell = 1.0 / static_cast<double>(coefficient_count(rank));
    return clamp_domain(cell + normalize_depth(x, bounds) * (1.0 - 2.0 * cell));
}

double world_depth_from_wavelet(double z, const DepthBounds& bounds, int rank) {
    if (bounds.empty()) {
        throw std::domain_error("no transparent coverage at pixel");
    }
    const double pad = std::max(1e-4 * (bounds.far() - bounds.near()), 1e-6);
    const double lo = bounds.near() - pad;
    const double hi = bounds.far() + pad;
    const double cell = 1.0 / static_cast<double>(coefficient_count(rank));
    if (rank == 0) {
        // Every interface maps to z = 0.5; split the ray there.
        return z < 0.5 ? lo : (z > 0.5 ? hi : 0.5 * (lo + hi));
    }
    const double u = (z - cell) / (1.0 - 2.0 * cell);
    return lo + u * (hi - lo);
}

double haar_wavelet(int level, int offset, double x) {
    const double u = std::ldexp(x, level) - offset;
    if (u < 0.0 || u >= 1.0) {
        return 0.0;
    }
    const double height = std::pow(2.0, 0.5 * level);
    return u < 0.5 ? height : -height;
}

double psi_integral(int level, int offset, double x) {
    if (level < 0 || level > 30 || offset < 0 || offset >= (1 << level)) {
        throw std::out_of_range("wavelet (level, offset) out of range");
    }
    const double u = std::ldexp(x, level) - offset;
    const double scale = std::pow(2.0, -0.5 * level);
    if (u >= 0.0 && u < 0.5) {
        return scale * u;
    }
    if (u >= 0.5 && u <= 1.0) {
        return scale * (1.0 - u);
    }
    return 0.0;
}

int add_interface(WaveletBuffer& buffer, double z, const Spectrum3& a) {
    return accumulate_interface(buffer, z, a, [](double& slot, double delta) { slot += delta; });
}

int add_interface_concurrent(WaveletBuffer& buffer, double z, const Spectrum3& a) {
    return accumulate_interface(buffer, z, a, atomic_add);
}

Spectrum3 reconstruct_cell(const WaveletBuffer& buffer, std::size_t cell, int* touches) {
    const int rank = buffer.rank();
    Spectrum3 value = buffer[0];
    for (int n = 0; n <= rank; ++n) {
        const auto k = static_cast<int>(cell >> (rank + 1 - n));
        const bool right_half = ((cell >> (rank - n)) & 1U) != 0;
        const double height = std::pow(2.0, 0.5 * n);
        value += buffer[coefficient_index(n, k)] * (right_half ? -height : height);
    }
    if (touches != nullptr) {
        *touches = rank + 2;
    }
    return value;
}

namespace {

// Linear interpolation between cell-centre values, clamped to the end centres.
template <typename T, typename Node>
T interpolate_centres(std::size_t cells, double z, Node&& node) {
    const double pos = clamp_domain(z) * static_cast<double>(cells) - 0.5;
    if (pos <= 0.0) {
        return node(0);
    }
    if (pos >= static_cast<double>(cells - 1)) {
        return node(cells - 1);
    }
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double f = pos - static_cast<double>(lo);
    T v = node(lo);
    if (f > 0.0) {
        v = v * (1.0 - f) + node(lo + 1) * f;
    }
    return v;
}

Spectrum3 raw_absorbance(const WaveletBuffer& buffer, double z, EvalTrace* trace) {
    int touches = 0;
    return interpolate_centres<Spectrum3>(coefficient_count(buffer.rank()), z, [&](std::size_t cell) {
        Spectrum3 v = reconstruct_cell(buffer, cell, &touches);
        if (trace != nullptr) {
            ++trace->nodes;
            trace->slot_reads += static_cast<std::uint64_t>(touches);
        }
        return v;
    });
}

Spectrum3 to_visibility(Spectrum3 a) {
    return {std::exp(-std::max(0.0, a.r)), std::exp(-std::max(0.0, a.g)), std::exp(-std::max(0.0, a.b))};
}

}  // namespace

Spectrum3 evaluate_absorbance(const WaveletBuffer& buffer, double z, EvalTrace* trace) {
    Spectrum3 a = raw_absorbance(buffer, z, trace);
    for (std::size_t c = 0; c < 3; ++c) {
        a[c] = std::max(0.0, a[c]);
    }
    return a;
}

Spectrum3 evaluate_visibility(const WaveletBuffer& buffer, double z, EvalTrace* trace) {
    return to_visibility(raw_absorbance(buffer, z, trace));
}

double self_step_response(int rank, double z) {
    const std::size_t cells = coefficient_count(rank);
    const double x = clamp_domain(z) * static_cast<double>(cells);
    // The full-rank projection of a step is its cell average.
    return interpolate_centres<double>(cells, z, [&](std::size_t cell) {
        return std::clamp(static_cast<double>(cell) + 1.0 - x, 0.0, 1.0);
    });
}

Spectrum3 evaluate_visibility_before(const WaveletBuffer& buffer, double z, const Spectrum3& own_absorbance,
                                     EvalTrace* trace) {
    return to_visibility(raw_absorbance(buffer, z, trace) - own_absorbance * self_step_response(buffer.rank(), z));
}

Spectrum3 total_visibility(const WaveletBuffer& buffer, EvalTrace* trace) {
    return evaluate_visibility(buffer, kMaxNormalizedDepth, trace);
}

std::uint32_t pack_rgb9e5(const Spectrum3& v) {
    for (std::size_t c = 0; c < 3; ++c) {
        if (std::isnan(v[c])) {
            throw std::invalid_argument("cannot pack NaN");
        }
        if (v[c] < 0.0) {
            throw std::invalid_argument("cannot pack a negative magnitude");
        }
    }
    const Spectrum3 clamped{std::min(v.r, kRgb9e5Max), std::min(v.g, kRgb9e5Max), std::min(v.b, kRgb9e5Max)};
    const double max_c = clamped.max_component();
    if (max_c == 0.0) {
        return 0;
    }

    int e2 = 0;
    std::frexp(max_c, &e2);  // max_c in [2^(e2-1), 2^e2)
    const int exponent = std::max(-kRgb9e5ExponentBias - 1, e2 - 1) + 1 + kRgb9e5ExponentBias;
    const double scale = std::ldexp(1.0, exponent - kRgb9e5ExponentBias - kRgb9e5MantissaBits);
    // No exponent bump when the largest mantissa rounds to 512: clamping it to
    // 511 keeps every channel within max_c * 2^-9, a bump would not.

    auto mantissa = [&](double c) {
        return std::min<std::uint32_t>(511U, static_cast<std::uint32_t>(std::floor(c / scale + 0.5)));
    };
    return mantissa(clamped.r) | (mantissa(clamped.g) << 9) | (mantissa(clamped.b) << 18) |
           (static_cast<std::uint32_t>(exponent) << 27);
}

Spectrum3 unpack_rgb9e5(std::uint32_t word) {
    const int exponent = static_cast<int>(word >> 27);
    const double scale = std::ldexp(1.0, exponent - kRgb9e5ExponentBias - kRgb9e5MantissaBits);
    return {static_cast<double>(word & 0x1FFU) * scale, static_cast<double>((word >> 9) & 0x1FFU) * scale,
            static_cast<double>((word >> 18) & 0x1FFU) * scale};
}

PackedWaveletPixel pack_pixel(const WaveletBuffer& buffer) {
    PackedWaveletPixel packed;
    packed.rank = buffer.rank();
    packed.words.reserve(buffer.size());
    for (std::size_t j = 0; j < buffer.size(); ++j) {
        const Spectrum3& c = buffer[j];
        packed.words.push_back(pack_rgb9e5({std::abs(c.r), std::abs(c.g), std::abs(c.b)}));
    }
    return packed;
}

WaveletBuffer unpack_pixel(const PackedWaveletPixel& packed) {
    WaveletBuffer buffer(packed.rank);
    if (packed.words.size() != buffer.size()) {
        throw std::invalid_argument("packed pixel word count does not match its rank");
    }
    for (std::size_t j = 0; j < buffer.size(); ++j) {
        const Spectrum3 magnitude = unpack_rgb9e5(packed.words[j]);
        buffer[j] = j == 0 ? magnitude : magnitude * -1.0;
    }
    return buffer;
}

}  // namespace woit
