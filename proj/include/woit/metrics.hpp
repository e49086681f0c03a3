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

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "woit/core.hpp"
#include "woit/image.hpp"
#include "woit/pipeline.hpp"

namespace woit {

struct CurveError {
    double l1 = 0.0;    ///< mean |d|
    double l2 = 0.0;    ///< sqrt(mean d^2)
    double linf = 0.0;  ///< max |d|
    std::size_t samples = 0;
};

/// Throws std::invalid_argument when the curves are not on the same z grid.
CurveError curve_error(const VisibilityCurve& approx, const VisibilityCurve& truth);

/// RMSE over every channel of every pixel. Throws std::invalid_argument on a
/// dimension mismatch.
double image_rmse(const Image& a, const Image& b);

/// 20 log10(1 / RMSE) for unit-range images; +infinity for identical images.
double image_psnr(const Image& a, const Image& b);

enum class CurveChannel { r, g, b, luminance };

/// Visibility along one pixel's ray, sampled at `samples` uniform points of
/// the wavelet depth domain used at `rank`.
struct CurveSet {
    VisibilityCurve truth;
    std::vector<std::pair<Method, VisibilityCurve>> methods;
    std::vector<double> surface_steps;  ///< wavelet-domain z of non-medium interfaces
    DepthBounds bounds;
};

CurveSet visibility_curves(const FragmentStream& fs, std::span<const Method> methods, int rank,
                           std::size_t samples, CurveChannel channel = CurveChannel::luminance,
                           CubeMode cube = CubeMode::off, const WboitWeight& wboit = {}, int mlab_slots = 4);

}  // namespace woit
