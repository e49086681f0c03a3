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

// Reference and competitor compositing: exact A-buffer, weighted blended OIT,
// and multi-layer alpha blending with k slots.

#include <vector>

#include "woit/core.hpp"

namespace woit {

/// Sorted front-to-back compositing of the whole stream over `background`.
Spectrum3 abuffer_composite(const FragmentStream& fs, const Spectrum3& background,
                            CubeMode cube = CubeMode::off);

/// w(z) = clamp(scale / (1e-5 + z^2 + z^6), lo, hi) on normalized depth.
struct WboitWeight {
    double scale = 10.0;
    double lo = 0.01;
    double hi = 3000.0;

    double operator()(double z) const;
};

/// Weighted blended OIT. Radiance is averaged with weights w(z) * (1 - t_c)
/// and scaled by the exact coverage 1 - prod(t); the background is modulated
/// by prod(t).
Spectrum3 wboit_composite(const FragmentStream& fs, const Spectrum3& background, const DepthBounds& bounds,
                          CubeMode cube = CubeMode::off, const WboitWeight& weight = {});

/// The factor WBOIT applies to a fragment's alpha-scaled radiance at world
/// depth x, per channel. Used to draw a WBOIT "visibility" curve.
Spectrum3 wboit_effective_visibility(const FragmentStream& fs, double x, const DepthBounds& bounds,
                                     CubeMode cube = CubeMode::off, const WboitWeight& weight = {});

struct MlabNode {
    Spectrum3 color;          ///< premultiplied (radiance * alpha, merged)
    Spectrum3 transmittance;  ///< in [0, 1]^3
    double depth = 0.0;
};

/// Streams `fs` in submission order into at most `slots` depth-sorted nodes.
/// On overflow the two farthest nodes merge, the farther composited under
/// the nearer. Throws std::invalid_argument if slots < 2.
std::vector<MlabNode> mlab_nodes(const FragmentStream& fs, int slots, CubeMode cube = CubeMode::off);

Spectrum3 mlab_composite(const FragmentStream& fs, const Spectrum3& background, int slots = 4,
                         CubeMode cube = CubeMode::off);

/// Product of node transmittances strictly in front of `x`.
Spectrum3 mlab_visibility(const std::vector<MlabNode>& nodes, double x);

}  // namespace woit
