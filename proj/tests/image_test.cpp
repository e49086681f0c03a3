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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace woit {
namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("woit_image_test_" + name);
}

TEST(Image, RejectsEmptyDimensions) {
    EXPECT_THROW(Image(0, 4), std::invalid_argument);
    EXPECT_THROW(Image(4, -1), std::invalid_argument);
}

TEST(Image, BilinearSampling) {
    Image img(2, 2);
    img.at(0, 0) = {0, 0, 0};
    img.at(1, 0) = {1, 0, 0};
    img.at(0, 1) = {0, 1, 0};
    img.at(1, 1) = {1, 1, 1};
    EXPECT_EQ(img.sample_bilinear(1.0, 0.0), (Spectrum3{1, 0, 0}));
    const Spectrum3 mid = img.sample_bilinear(0.5, 0.5);
    EXPECT_DOUBLE_EQ(mid.r, 0.5);
    EXPECT_DOUBLE_EQ(mid.g, 0.5);
    EXPECT_DOUBLE_EQ(mid.b, 0.25);
    EXPECT_EQ(img.sample_bilinear(-3.0, 7.0), img.at(0, 1));
}

TEST(Image, GammaCodesRoundTrip) {
    for (int code = 0; code < 256; ++code) {
        EXPECT_EQ(encode_gamma(decode_gamma(static_cast<std::uint8_t>(code))), code);
    }
    EXPECT_EQ(encode_gamma(-1.0), 0);
    EXPECT_EQ(encode_gamma(7.0), 255);
}

TEST(Image, PpmRoundTrip) {
    Image img(3, 2);
    for (int y = 0; y < 2; ++y) {
        for (int x = 0; x < 3; ++x) {
            img.at(x, y) = {decode_gamma(static_cast<std::uint8_t>(40 * x)),
                            decode_gamma(static_cast<std::uint8_t>(100 * y)), decode_gamma(200)};
        }
    }
    const auto path = temp_path("roundtrip.ppm");
    write_ppm(path, img);
    const Image back = read_ppm(path);
    ASSERT_EQ(back.width(), 3);
    ASSERT_EQ(back.height(), 2);
    EXPECT_EQ(encode_bytes(back), encode_bytes(img));

    std::ifstream raw(path, std::ios::binary);
    std::string magic;
    raw >> magic;
    EXPECT_EQ(magic, "P6");
    std::filesystem::remove(path);
}

TEST(Image, PpmErrors) {
    EXPECT_THROW(write_ppm("/nonexistent-dir/x.ppm", Image(1, 1)), std::runtime_error);
    EXPECT_THROW(read_ppm("/nonexistent-dir/x.ppm"), std::runtime_error);

    const auto bad = temp_path("bad.ppm");
    std::ofstream(bad) << "P3\n1 1\n255\n0 0 0\n";
    EXPECT_THROW(read_ppm(bad), std::runtime_error);
    std::ofstream(bad, std::ios::binary) << "P6\n# comment\n2 2\n255\nabc";
    EXPECT_THROW(read_ppm(bad), std::runtime_error);
    std::filesystem::remove(bad);
}

}  // namespace
}  // namespace woit
