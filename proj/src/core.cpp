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

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace woit {

void validate(const Fragment& f) {
    if (!(f.depth > 0.0) || !std::isfinite(f.depth)) {
        throw std::invalid_argument("fragment depth must be positive and finite");
    }
    if (!(f.alpha >= 0.0 && f.alpha <= 1.0)) {
        throw std::invalid_argument("fragment alpha outside [0, 1]");
    }
    for (std::size_t c = 0; c < 3; ++c) {
        if (!(f.transmission[c] >= 0.0 && f.transmission[c] <= 1.0)) {
            throw std::invalid_argument("fragment transmission outside [0, 1]");
        }
    }
    if (!is_finite(f.radiance)) {
        throw std::invalid_argument("fragment radiance must be finite");
    }
    if (std::abs(length(f.normal) - 1.0) > 1e-6) {
        throw std::invalid_argument("fragment normal is not unit length");
    }
    if (!(f.ior >= 1.0)) {
        throw std::invalid_argument("fragment ior must be >= 1");
    }
}

Spectrum3 fragment_transmittance(const Fragment& f, CubeMode cube) {
    bool cubed = false;
    if (f.ior > 1.0) {
        cubed = cube == CubeMode::refractive || (cube == CubeMode::refractive_back_faces && f.back_face);
    }
    Spectrum3 t;
    for (std::size_t c = 0; c < 3; ++c) {
        double tc = f.transmission[c];
        if (cubed) {
            tc = tc * tc * tc;
        }
        t[c] = 1.0 - f.alpha * (1.0 - tc);
    }
    return t;
}

Spectrum3 fragment_channel_absorbance(const Fragment& f, CubeMode cube) {
    const Spectrum3 t = fragment_transmittance(f, cube);
    Spectrum3 a;
    for (std::size_t c = 0; c < 3; ++c) {
        // -log(1) is -0.0; keep the sign bit clean.
        a[c] = std::max(0.0, -std::log(std::max(kTransmittanceFloor, t[c])));
    }
    return a;
}

FragmentStream sorted_by_depth(const FragmentStream& fs) {
    FragmentStream sorted = fs;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Fragment& a, const Fragment& b) { return a.depth < b.depth; });
    return sorted;
}

Spectrum3 exact_visibility(const FragmentStream& fs, double x, CubeMode cube) {
    Spectrum3 v = Spectrum3::splat(1.0);
    for (const Fragment& f : sorted_by_depth(fs)) {
        if (!(f.depth < x)) {
            break;
        }
        v *= fragment_transmittance(f, cube);
    }
    return v;
}

DepthBounds::DepthBounds(double near, double far) : empty_(false), near_(near), far_(far) {
    if (!std::isfinite(near) || !std::isfinite(far) || near > far) {
        throw std::invalid_argument("depth bounds need finite near <= far");
    }
}

DepthBounds DepthBounds::of(const FragmentStream& fs) {
    DepthBounds b;
    for (const Fragment& f : fs) {
        b.include(f.depth);
    }
    return b;
}

void DepthBounds::include(double depth) {
    near_ = std::min(near_, depth);
    far_ = std::max(far_, depth);
    empty_ = false;
}

VisibilityCurve::VisibilityCurve(std::vector<CurveSample> samples) : samples_(std::move(samples)) {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (i > 0 && !(samples_[i].z > samples_[i - 1].z)) {
            throw std::invalid_argument("visibility curve z must be strictly increasing");
        }
        if (!(samples_[i].v >= 0.0 && samples_[i].v <= 1.0)) {
            throw std::invalid_argument("visibility curve value outside [0, 1] at sample " +
                                        std::to_string(i));
        }
    }
}

std::vector<double> uniform_grid(std::size_t count) {
    std::vector<double> z(count);
    for (std::size_t i = 0; i < count; ++i) {
        z[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    }
    return z;
}

}  // namespace woit
