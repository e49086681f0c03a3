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

// Haar-wavelet approximation of the per-pixel absorbance function A(z) on
// normalized linear depth z in [0, 1).
//
// A stream of interfaces A(z) = sum_i a_i * theta(z - z_i) projects onto the
// scaling function phi_00 = 1 and the Haar wavelets psi_{n,k} in closed form:
//
//   chi_00  =  sum_i a_i * (1 - z_i)
//   X_{n,k} = -sum_i a_i * Psi_{n,k}(z_i)
//
// where Psi_{n,k} is the antiderivative of psi_{n,k}, a triangular bump that
// is zero outside [k / 2^n, (k + 1) / 2^n]. Each interface therefore touches
// one coefficient per level plus the scaling coefficient, and so does a point
// reconstruction.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "woit/core.hpp"

namespace woit {

inline constexpr int kMaxRank = 6;

/// Largest z accepted by the wavelet domain; keeps floor(2^n z) < 2^n.
inline constexpr double kMaxNormalizedDepth = 1.0 - 1.0 / 16777216.0;

/// 2^(rank + 1): coefficients per channel, also the number of Haar cells.
constexpr std::size_t coefficient_count(int rank) { return std::size_t{2} << rank; }

/// Level-major slot of X_{n,k}; slot 0 is the scaling coefficient.
constexpr std::size_t coefficient_index(int level, int offset) {
    return (std::size_t{1} << level) + static_cast<std::size_t>(offset);
}

/// Per-pixel Haar coefficients of the absorbance, one Spectrum3 per slot.
///
/// Invariants (for non-negative absorbance input): slot 0 >= 0, every other
/// slot <= 0, per channel.
class WaveletBuffer {
public:
    explicit WaveletBuffer(int rank = 3);

    int rank() const { return rank_; }
    std::size_t size() const { return coeffs_.size(); }

    Spectrum3& operator[](std::size_t slot) { return coeffs_[slot]; }
    const Spectrum3& operator[](std::size_t slot) const { return coeffs_[slot]; }

    std::span<Spectrum3> coefficients() { return coeffs_; }
    std::span<const Spectrum3> coefficients() const { return coeffs_; }

    void clear();

private:
    int rank_;
    std::vector<Spectrum3> coeffs_;
};

/// Maps world depth into [0, 1) over bounds padded by
/// max(1e-4 * (far - near), 1e-6) on both sides. Throws std::domain_error
/// for empty bounds.
double normalize_depth(double x, const DepthBounds& bounds);

/// Depth coordinate used for coefficient storage at `rank`: the normalized
/// depth squeezed into [1/M, 1 - 1/M] with M = 2^(rank+1) cells. The first
/// and last Haar cells stay free of interfaces, so the last cell carries the
/// total absorbance and A(0) reconstructs to zero.
double wavelet_depth(double x, const DepthBounds& bounds, int rank);

/// Inverse of wavelet_depth on the padded interval (for plotting).
double world_depth_from_wavelet(double z, const DepthBounds& bounds, int rank);

/// Haar wavelet psi_{n,k}(x): +2^(n/2) on the left half of its support,
/// -2^(n/2) on the right half, 0 elsewhere.
double haar_wavelet(int level, int offset, double x);

/// Psi_{n,k}(x), the antiderivative of psi_{n,k} from 0. Non-negative.
/// Throws std::out_of_range unless 0 <= offset < 2^level.
double psi_integral(int level, int offset, double x);

/// Adds an interface of absorbance `a` at depth `z`. Returns the number of
/// coefficient slots touched per channel (rank + 2).
int add_interface(WaveletBuffer& buffer, double z, const Spectrum3& a);

/// Same update as add_interface, safe against concurrent callers on the same
/// buffer. Each coefficient is updated with a compare-and-swap loop, so the
/// result equals some sequential order up to floating-point reassociation.
int add_interface_concurrent(WaveletBuffer& buffer, double z, const Spectrum3& a);

/// Raw Haar reconstruction at the centre of `cell` (one wavelet per level).
/// `touches`, when given, receives the number of slots read.
Spectrum3 reconstruct_cell(const WaveletBuffer& buffer, std::size_t cell, int* touches = nullptr);

/// Counters for evaluate_absorbance: how many cell-centre reconstructions
/// ran and how many coefficient slots they read in total.
struct EvalTrace {
    std::uint64_t nodes = 0;
    std::uint64_t slot_reads = 0;
};

/// Piecewise-linear interpolation of the Haar staircase between cell centres,
/// clamped to the end centres and to A >= 0.
Spectrum3 evaluate_absorbance(const WaveletBuffer& buffer, double z, EvalTrace* trace = nullptr);

/// exp(-evaluate_absorbance), in (0, 1].
Spectrum3 evaluate_visibility(const WaveletBuffer& buffer, double z, EvalTrace* trace = nullptr);

/// Value at z of the reconstruction of a unit interface inserted at z.
double self_step_response(int rank, double z);

/// Visibility at an interface inserted at z with the given absorbance, with
/// that interface's own contribution to the reconstruction removed.
Spectrum3 evaluate_visibility_before(const WaveletBuffer& buffer, double z, const Spectrum3& own_absorbance,
                                     EvalTrace* trace = nullptr);

/// Visibility as z -> 1 (value at the last cell centre).
Spectrum3 total_visibility(const WaveletBuffer& buffer, EvalTrace* trace = nullptr);

// Shared-exponent packing.
//
// Word layout (little end first):
//   bits  0..8   R mantissa
//   bits  9..17  G mantissa
//   bits 18..26  B mantissa
//   bits 27..31  shared exponent e, bias 15
// value = mantissa * 2^(e - 15 - 9)

inline constexpr int kRgb9e5ExponentBias = 15;
inline constexpr int kRgb9e5MantissaBits = 9;
inline constexpr double kRgb9e5Max = 511.0 * 128.0;  // 511 * 2^(31 - 24)

/// Packs non-negative magnitudes; values above kRgb9e5Max clamp to it.
/// Throws std::invalid_argument on NaN or negative input.
std::uint32_t pack_rgb9e5(const Spectrum3& v);
Spectrum3 unpack_rgb9e5(std::uint32_t word);

/// One word per coefficient slot. Slot 0 stores +chi_00, other slots store
/// |X_{n,k}| and unpack with a negative sign.
struct PackedWaveletPixel {
    int rank = 3;
    std::vector<std::uint32_t> words;

    std::size_t bytes() const { return words.size() * sizeof(std::uint32_t); }
};

PackedWaveletPixel pack_pixel(const WaveletBuffer& buffer);
WaveletBuffer unpack_pixel(const PackedWaveletPixel& packed);

/// Bytes per pixel of packed storage at `rank`: 4 * 2^(rank+1).
constexpr std::size_t packed_bytes_per_pixel(int rank) { return 4 * coefficient_count(rank); }

}  // namespace woit
