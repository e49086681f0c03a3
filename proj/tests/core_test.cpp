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

#include "woit/core.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace woit {
namespace {

Fragment glass(double depth, Spectrum3 transmission, double alpha = 1.0, double ior = 1.5) {
    Fragment f;
    f.depth = depth;
    f.alpha = alpha;
    f.transmission = transmission;
    f.ior = ior;
    return f;
}

TEST(Fragment, ValidateRejectsBrokenInvariants) {
    EXPECT_NO_THROW(validate(glass(1.0, Spectrum3::splat(0.5))));
    EXPECT_THROW(validate(glass(0.0, Spectrum3::splat(0.5))), std::invalid_argument);
    EXPECT_THROW(validate(glass(1.0, Spectrum3::splat(0.5), 1.5)), std::invalid_argument);
    EXPECT_THROW(validate(glass(1.0, {1.2, 0.5, 0.5})), std::invalid_argument);
    EXPECT_THROW(validate(glass(1.0, Spectrum3::splat(0.5), 1.0, 0.9)), std::invalid_argument);
    Fragment bad_normal = glass(1.0, Spectrum3::splat(0.5));
    bad_normal.normal = {0.0, 0.0, -2.0};
    EXPECT_THROW(validate(bad_normal), std::invalid_argument);
    Fragment nan_radiance = glass(1.0, Spectrum3::splat(0.5));
    nan_radiance.radiance.g = std::nan("");
    EXPECT_THROW(validate(nan_radiance), std::invalid_argument);
}

TEST(Fragment, TransmittanceMixesCoverageAndTint) {
    const Spectrum3 t = fragment_transmittance(glass(1.0, {0.5, 1.0, 0.0}, 0.5));
    EXPECT_DOUBLE_EQ(t.r, 0.75);
    EXPECT_DOUBLE_EQ(t.g, 1.0);
    EXPECT_DOUBLE_EQ(t.b, 0.5);
}

TEST(Fragment, CubeModes) {
    Fragment front = glass(1.0, Spectrum3::splat(0.5));
    Fragment back = front;
    back.back_face = true;
    EXPECT_DOUBLE_EQ(fragment_transmittance(front, CubeMode::off).r, 0.5);
    EXPECT_DOUBLE_EQ(fragment_transmittance(front, CubeMode::refractive).r, 0.125);
    EXPECT_DOUBLE_EQ(fragment_transmittance(front, CubeMode::refractive_back_faces).r, 0.5);
    EXPECT_DOUBLE_EQ(fragment_transmittance(back, CubeMode::refractive_back_faces).r, 0.125);

    const Fragment smoke = glass(1.0, Spectrum3::splat(0.5), 1.0, 1.0);
    EXPECT_DOUBLE_EQ(fragment_transmittance(smoke, CubeMode::refractive).r, 0.5);
}

TEST(Fragment, AbsorbanceIsFlooredAndNonNegative) {
    const Spectrum3 a = fragment_channel_absorbance(glass(1.0, {1.0, 0.5, 0.0}));
    EXPECT_EQ(a.r, 0.0);
    EXPECT_FALSE(std::signbit(a.r));
    EXPECT_DOUBLE_EQ(a.g, std::log(2.0));
    EXPECT_DOUBLE_EQ(a.b, -std::log(kTransmittanceFloor));
}

TEST(ExactVisibility, ProductOfStrictlyNearerFragments) {
    const FragmentStream fs{glass(3.0, Spectrum3::splat(0.5)), glass(1.0, Spectrum3::splat(0.8)),
                            glass(2.0, Spectrum3::splat(0.25))};
    EXPECT_DOUBLE_EQ(exact_visibility(fs, 0.5).r, 1.0);
    EXPECT_DOUBLE_EQ(exact_visibility(fs, 1.0).r, 1.0);
    EXPECT_DOUBLE_EQ(exact_visibility(fs, 1.5).r, 0.8);
    EXPECT_DOUBLE_EQ(exact_visibility(fs, 2.5).r, 0.2);
    EXPECT_DOUBLE_EQ(exact_visibility(fs, 10.0).r, 0.1);
    EXPECT_DOUBLE_EQ(exact_visibility({}, 10.0).g, 1.0);
}

TEST(SortedByDepth, StableForTies) {
    FragmentStream fs{glass(2.0, Spectrum3::splat(0.1)), glass(1.0, Spectrum3::splat(0.2)),
                      glass(2.0, Spectrum3::splat(0.3))};
    const FragmentStream s = sorted_by_depth(fs);
    EXPECT_DOUBLE_EQ(s[0].transmission.r, 0.2);
    EXPECT_DOUBLE_EQ(s[1].transmission.r, 0.1);
    EXPECT_DOUBLE_EQ(s[2].transmission.r, 0.3);
}

TEST(DepthBounds, EmptyAndInclusive) {
    DepthBounds b;
    EXPECT_TRUE(b.empty());
    b.include(3.0);
    b.include(1.5);
    EXPECT_FALSE(b.empty());
    EXPECT_DOUBLE_EQ(b.near(), 1.5);
    EXPECT_DOUBLE_EQ(b.far(), 3.0);
    EXPECT_THROW(DepthBounds(2.0, 1.0), std::invalid_argument);
    EXPECT_TRUE(DepthBounds::of({}).empty());
}

TEST(VisibilityCurve, RejectsBadSamples) {
    EXPECT_NO_THROW(VisibilityCurve({{0.1, 1.0}, {0.2, 0.5}}));
    EXPECT_THROW(VisibilityCurve({{0.2, 1.0}, {0.2, 0.5}}), std::invalid_argument);
    EXPECT_THROW(VisibilityCurve({{0.1, 1.5}}), std::invalid_argument);
}

TEST(UniformGrid, Midpoints) {
    const auto z = uniform_grid(4);
    ASSERT_EQ(z.size(), 4u);
    EXPECT_DOUBLE_EQ(z[0], 0.125);
    EXPECT_DOUBLE_EQ(z[3], 0.875);
}

TEST(Spectrum, LuminanceOfWhiteIsOne) {
    EXPECT_NEAR(luminance(Spectrum3::splat(1.0)), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ((Spectrum3{1, 2, 3}).max_component(), 3.0);
}

}  // namespace
}  // namespace woit
