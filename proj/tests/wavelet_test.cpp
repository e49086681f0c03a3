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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "support/haar_oracle.hpp"

namespace woit {
namespace {

using testing::StepInterface;

WaveletBuffer build(const std::vector<StepInterface>& steps, int rank) {
    WaveletBuffer buf(rank);
    for (const auto& s : steps) {
        add_interface(buf, s.x, Spectrum3::splat(s.a));
    }
    return buf;
}

TEST(WaveletLayout, CountsAndSlots) {
    EXPECT_EQ(coefficient_count(0), 2u);
    EXPECT_EQ(coefficient_count(3), 16u);
    EXPECT_EQ(coefficient_index(0, 0), 1u);
    EXPECT_EQ(coefficient_index(2, 3), 7u);
    EXPECT_EQ(WaveletBuffer(5).size(), 64u);
    EXPECT_THROW(WaveletBuffer(-1), std::invalid_argument);
    EXPECT_THROW(WaveletBuffer(kMaxRank + 1), std::invalid_argument);
}

TEST(WaveletBasis, HaarHeightsAndSupport) {
    EXPECT_DOUBLE_EQ(haar_wavelet(0, 0, 0.25), 1.0);
    EXPECT_DOUBLE_EQ(haar_wavelet(0, 0, 0.75), -1.0);
    EXPECT_DOUBLE_EQ(haar_wavelet(2, 1, 0.3), 2.0);
    EXPECT_DOUBLE_EQ(haar_wavelet(2, 1, 0.45), -2.0);
    EXPECT_DOUBLE_EQ(haar_wavelet(2, 1, 0.6), 0.0);
}

TEST(WaveletBasis, PsiIntegralIsTriangle) {
    EXPECT_DOUBLE_EQ(psi_integral(0, 0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(psi_integral(0, 0, 0.5), 0.5);
    EXPECT_DOUBLE_EQ(psi_integral(0, 0, 1.0), 0.0);
    EXPECT_NEAR(psi_integral(2, 1, 0.375), 0.25, 1e-15);  // peak 2^(-n/2) / 2
    EXPECT_DOUBLE_EQ(psi_integral(2, 1, 0.9), 0.0);
    EXPECT_THROW(psi_integral(2, 4, 0.5), std::out_of_range);
    EXPECT_THROW(psi_integral(1, -1, 0.5), std::out_of_range);

    // Matches a numerical antiderivative of haar_wavelet.
    const int n = 3;
    const int k = 5;
    const int steps = 1 << 14;
    double running = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double x = (i + 0.5) / steps;
        running += haar_wavelet(n, k, x) / steps;
        if (i % 97 == 0) {
            EXPECT_NEAR(psi_integral(n, k, (i + 1.0) / steps), running, 1e-3) << x;
        }
    }
}

TEST(WaveletInsert, SinglePlaneCoefficients) {
    // Interface of absorbance a at z = 0.5: chi = a/2, X_00 = -a/2, finer levels
    // are zero because 0.5 is a support boundary for them.
    const double a = -std::log(0.75);
    WaveletBuffer buf(3);
    EXPECT_EQ(add_interface(buf, 0.5, Spectrum3::splat(a)), 5);
    EXPECT_NEAR(buf[0].r, a / 2, 1e-15);
    EXPECT_NEAR(buf[1].r, -a / 2, 1e-15);
    for (std::size_t s = 2; s < buf.size(); ++s) {
        EXPECT_EQ(buf[s].r, 0.0) << s;
    }
}

TEST(WaveletInsert, TouchesRankPlusTwoSlots) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rank = 0; rank <= kMaxRank; ++rank) {
        for (int trial = 0; trial < 20; ++trial) {
            WaveletBuffer buf(rank);
            const double z = u(rng);
            EXPECT_EQ(add_interface(buf, z, {0.3, 0.2, 0.1}), rank + 2);
            int changed = 0;
            for (std::size_t s = 0; s < buf.size(); ++s) {
                changed += buf[s].r != 0.0 ? 1 : 0;
            }
            EXPECT_LE(changed, rank + 2);
        }
    }
}

TEST(WaveletInsert, MatchesQuadratureOracle) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 120; ++trial) {
        const int rank = trial % 6;
        const auto steps = testing::random_steps(rng, 64, 1.5);
        const auto oracle = testing::project_haar(steps, rank);
        const WaveletBuffer buf = build(steps, rank);
        for (std::size_t s = 0; s < buf.size(); ++s) {
            EXPECT_NEAR(buf[s].g, oracle[s], 1e-9) << "rank " << rank << " slot " << s;
        }
    }
}

TEST(WaveletInsert, SignTheorem) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const WaveletBuffer buf = build(testing::random_steps(rng, 64, 3.0), trial % 7);
        EXPECT_GE(buf[0].r, 0.0);
        for (std::size_t s = 1; s < buf.size(); ++s) {
            EXPECT_LE(buf[s].r, 0.0);
        }
    }
}

TEST(WaveletInsert, ConcurrentMatchesSequential) {
    std::mt19937_64 rng(9);
    const auto steps = testing::random_steps(rng, 64, 1.0);
    std::vector<StepInterface> many;
    for (int rep = 0; rep < 200; ++rep) {
        many.insert(many.end(), steps.begin(), steps.end());
    }
    const WaveletBuffer sequential = build(many, 4);

    WaveletBuffer shared(4);
    constexpr int kThreads = 4;
    std::vector<std::thread> threads;
    for (int t = 0; t < kThreads; ++t) {
        threads.emplace_back([&, t] {
            for (std::size_t i = static_cast<std::size_t>(t); i < many.size(); i += kThreads) {
                add_interface_concurrent(shared, many[i].x, Spectrum3::splat(many[i].a));
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    for (std::size_t s = 0; s < shared.size(); ++s) {
        EXPECT_NEAR(shared[s].b, sequential[s].b, 1e-9 * std::max(1.0, std::abs(sequential[s].b)));
    }
}

TEST(WaveletInsert, ClampsDepthIntoDomain) {
    WaveletBuffer a(2);
    WaveletBuffer b(2);
    add_interface(a, 1.5, Spectrum3::splat(1.0));
    add_interface(b, kMaxNormalizedDepth, Spectrum3::splat(1.0));
    for (std::size_t s = 0; s < a.size(); ++s) {
        EXPECT_EQ(a[s], b[s]);
    }
}

TEST(WaveletEval, CellCentresMatchOracleExpansion) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const int rank = trial % 6;
        const auto steps = testing::random_steps(rng, 32, 1.0);
        const auto oracle = testing::project_haar(steps, rank);
        const WaveletBuffer buf = build(steps, rank);
        const std::size_t cells = coefficient_count(rank);
        for (std::size_t c = 0; c < cells; ++c) {
            const double centre = (c + 0.5) / static_cast<double>(cells);
            int touches = 0;
            EXPECT_NEAR(reconstruct_cell(buf, c, &touches).r, testing::expand_haar(oracle, centre), 1e-9);
            EXPECT_EQ(touches, rank + 2);
            EXPECT_NEAR(evaluate_absorbance(buf, centre).r, std::max(0.0, testing::expand_haar(oracle, centre)),
                        1e-9);
        }
    }
}

TEST(WaveletEval, InterpolatesBetweenCentresAndClampsEnds) {
    WaveletBuffer buf(1);  // 4 cells, centres 1/8, 3/8, 5/8, 7/8
    add_interface(buf, 0.5, Spectrum3::splat(2.0));
    EXPECT_NEAR(evaluate_absorbance(buf, 0.0).r, 0.0, 1e-15);
    EXPECT_NEAR(evaluate_absorbance(buf, 3.0 / 8).r, 0.0, 1e-15);
    EXPECT_NEAR(evaluate_absorbance(buf, 0.5).r, 1.0, 1e-15);
    EXPECT_NEAR(evaluate_absorbance(buf, 9.0 / 16).r, 1.5, 1e-15);
    EXPECT_NEAR(evaluate_absorbance(buf, 5.0 / 8).r, 2.0, 1e-15);
    EXPECT_NEAR(evaluate_absorbance(buf, 0.99).r, 2.0, 1e-15);
    EXPECT_NEAR(total_visibility(buf).r, std::exp(-2.0), 1e-15);
}

TEST(WaveletEval, ZeroBufferIsFullyVisible) {
    const WaveletBuffer buf(3);
    for (double z : {0.0, 0.3, 0.99}) {
        EXPECT_EQ(evaluate_absorbance(buf, z), Spectrum3{});
        EXPECT_EQ(evaluate_visibility(buf, z), Spectrum3::splat(1.0));
    }
}

TEST(WaveletEval, TraceCountsNodesAndSlotReads) {
    WaveletBuffer buf(3);
    add_interface(buf, 0.4, Spectrum3::splat(1.0));
    EvalTrace interior;
    evaluate_absorbance(buf, 0.41, &interior);
    EXPECT_EQ(interior.nodes, 2u);
    EXPECT_EQ(interior.slot_reads, 10u);
    EvalTrace end;
    evaluate_absorbance(buf, 0.999, &end);
    EXPECT_EQ(end.nodes, 1u);
    EXPECT_EQ(end.slot_reads, 5u);
}

TEST(WaveletEval, SinglePlaneStepAtCellCentres) {
    const double a = -std::log(0.75);
    for (int rank = 0; rank <= 5; ++rank) {
        WaveletBuffer buf(rank);
        add_interface(buf, 0.5, Spectrum3::splat(a));
        const std::size_t cells = coefficient_count(rank);
        for (std::size_t c = 0; c < cells; ++c) {
            const double expected = c < cells / 2 ? 1.0 : 0.75;
            EXPECT_NEAR(evaluate_visibility(buf, (c + 0.5) / cells).r, expected, 1e-12) << rank << " " << c;
        }
    }
}

TEST(WaveletEval, SelfStepResponse) {
    // At a cell centre the step splits the centre node in half; the previous
    // centre sees nothing of it.
    EXPECT_NEAR(self_step_response(3, 5.5 / 16), 0.5, 1e-12);
    // On a cell boundary the step fills the next cell: halfway between centres.
    EXPECT_NEAR(self_step_response(3, 6.0 / 16), 0.5, 1e-12);
    // A quarter cell past a centre: node c holds 0.25, node c+1 holds 1.
    EXPECT_NEAR(self_step_response(3, 5.75 / 16), 0.75 * 0.25 + 0.25 * 1.0, 1e-12);

    WaveletBuffer buf(3);
    const Spectrum3 a{0.4, 1.0, 2.0};
    add_interface(buf, 0.3, a);
    const Spectrum3 v = evaluate_visibility_before(buf, 0.3, a);
    for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_NEAR(v[c], 1.0, 1e-12);
    }
}

TEST(WaveletEval, BeforeExcludesOnlyTheOwnInterface) {
    WaveletBuffer buf(3);
    add_interface(buf, 0.1, Spectrum3::splat(0.5));
    add_interface(buf, 0.6, Spectrum3::splat(0.8));
    const Spectrum3 v = evaluate_visibility_before(buf, 0.6, Spectrum3::splat(0.8));
    EXPECT_NEAR(v.r, std::exp(-0.5), 1e-12);
}

TEST(WaveletDepth, NormalizeDepthPadsBounds) {
    const DepthBounds b(2.0, 4.0);
    const double pad = 2e-4;
    EXPECT_NEAR(normalize_depth(2.0, b), pad / (2.0 + 2 * pad), 1e-15);
    EXPECT_NEAR(normalize_depth(3.0, b), 0.5, 1e-15);
    EXPECT_LT(normalize_depth(4.0, b), 1.0);
    EXPECT_EQ(normalize_depth(100.0, b), kMaxNormalizedDepth);
    EXPECT_EQ(normalize_depth(-5.0, b), 0.0);
    EXPECT_THROW(normalize_depth(1.0, DepthBounds{}), std::domain_error);
    // Degenerate bounds use the absolute pad.
    EXPECT_NEAR(normalize_depth(1.0, DepthBounds(1.0, 1.0)), 0.5, 1e-9);
}

TEST(WaveletDepth, GuardCellsAndInverse) {
    const DepthBounds b(1.0, 3.0);
    for (int rank = 1; rank <= 5; ++rank) {
        const double cell = 1.0 / static_cast<double>(coefficient_count(rank));
        EXPECT_GT(wavelet_depth(1.0, b, rank), cell);
        EXPECT_LT(wavelet_depth(3.0, b, rank), 1.0 - cell);
        for (double x : {1.0, 1.7, 2.9, 3.0}) {
            EXPECT_NEAR(world_depth_from_wavelet(wavelet_depth(x, b, rank), b, rank), x, 1e-12);
        }
    }
    EXPECT_DOUBLE_EQ(wavelet_depth(1.3, b, 0), 0.5);
    EXPECT_NEAR(wavelet_depth(5.0, DepthBounds(5.0, 5.0), 3), 0.5, 1e-12);
}

TEST(WaveletDepth, TotalVisibilityRecoversEveryInterface) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(1.0, 9.0);
    for (int rank = 0; rank <= 5; ++rank) {
        std::vector<double> xs(12);
        for (auto& x : xs) {
            x = u(rng);
        }
        DepthBounds b;
        for (double x : xs) {
            b.include(x);
        }
        WaveletBuffer buf(rank);
        for (double x : xs) {
            add_interface(buf, wavelet_depth(x, b, rank), Spectrum3::splat(0.1));
        }
        EXPECT_NEAR(total_visibility(buf).r, std::exp(-1.2), 1e-12) << rank;
        EXPECT_NEAR(evaluate_visibility(buf, 0.0).r, 1.0, 1e-12) << rank;
    }
}

TEST(Rgb9e5, ExactDyadicTriple) {
    const std::uint32_t w = pack_rgb9e5({0.5, 0.25, 0.125});
    EXPECT_EQ(unpack_rgb9e5(w), (Spectrum3{0.5, 0.25, 0.125}));
}

TEST(Rgb9e5, BitLayout) {
    // 1.0 -> exponent e with 2^(e-24) * m = 1; the encoder picks m = 256, e = 16.
    const std::uint32_t w = pack_rgb9e5({1.0, 0.0, 0.0});
    EXPECT_EQ(w & 0x1FFu, 256u);
    EXPECT_EQ((w >> 9) & 0x1FFu, 0u);
    EXPECT_EQ((w >> 18) & 0x1FFu, 0u);
    EXPECT_EQ(w >> 27, 16u);
    EXPECT_EQ(pack_rgb9e5({}), 0u);
    EXPECT_EQ(unpack_rgb9e5(0), Spectrum3{});
}

TEST(Rgb9e5, ClampsAndRejects) {
    EXPECT_EQ(unpack_rgb9e5(pack_rgb9e5({1e9, 0.0, 0.0})).r, kRgb9e5Max);
    EXPECT_THROW(pack_rgb9e5({-1.0, 0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(pack_rgb9e5({std::nan(""), 0.0, 0.0}), std::invalid_argument);
}

TEST(Rgb9e5, RelativeErrorBound) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> mag(0.0, 1.0);
    std::uniform_int_distribution<int> octave(-14, 15);
    for (int i = 0; i < 20000; ++i) {
        const double scale = std::ldexp(1.0, octave(rng));
        const Spectrum3 v{mag(rng) * scale, mag(rng) * scale, mag(rng) * scale};
        const Spectrum3 back = unpack_rgb9e5(pack_rgb9e5(v));
        for (std::size_t c = 0; c < 3; ++c) {
            EXPECT_LE(std::abs(back[c] - v[c]), std::max(std::ldexp(v.max_component(), -9), std::ldexp(1.0, -25)));
        }
    }
}

TEST(Rgb9e5, LargestMantissaDoesNotBumpExponent) {
    // 63.99 would round to mantissa 512 at step 1/8; it stays at 511 and the
    // small channel keeps the 1/8 step.
    const Spectrum3 v{63.99, 0.0624, 0.0};
    const Spectrum3 back = unpack_rgb9e5(pack_rgb9e5(v));
    EXPECT_DOUBLE_EQ(back.r, 511.0 / 8);
    EXPECT_DOUBLE_EQ(back.g, 0.0);
    EXPECT_LE(std::abs(back.r - v.r), v.r / 512);
}

TEST(Rgb9e5, SmallestExponentHasAbsoluteFloor) {
    // Below 2^-15 the shared exponent bottoms out; the step is 2^-24.
    const double tiny = 3e-7;
    const double back = unpack_rgb9e5(pack_rgb9e5({tiny, 0.0, 0.0})).r;
    EXPECT_LE(std::abs(back - tiny), std::ldexp(1.0, -25));
}

TEST(PackedPixel, SizeAndSigns) {
    WaveletBuffer buf(3);
    add_interface(buf, 0.3, {0.5, 0.25, 1.0});
    add_interface(buf, 0.7, {0.125, 0.5, 0.25});
    const PackedWaveletPixel packed = pack_pixel(buf);
    EXPECT_EQ(packed.bytes(), 64u);
    EXPECT_EQ(packed_bytes_per_pixel(3), 64u);
    EXPECT_EQ(packed_bytes_per_pixel(0), 8u);
    const WaveletBuffer back = unpack_pixel(packed);
    EXPECT_EQ(back.rank(), 3);
    for (std::size_t s = 0; s < buf.size(); ++s) {
        const double word_max = std::max({std::abs(buf[s].r), std::abs(buf[s].g), std::abs(buf[s].b)});
        for (std::size_t c = 0; c < 3; ++c) {
            EXPECT_NEAR(back[s][c], buf[s][c], std::ldexp(word_max, -9));
            if (s > 0) {
                EXPECT_LE(back[s][c], 0.0);
            }
        }
    }
}

}  // namespace
}  // namespace woit
