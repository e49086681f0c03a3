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

#include "woit/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "woit/wavelet.hpp"

namespace woit {

namespace {

constexpr double kWeightFloor = 1e-12;

const DepthBounds& bounds_or(const FragmentStream& fs, const DepthBounds& bounds, DepthBounds& storage) {
    if (!bounds.empty()) {
        return bounds;
    }
    storage = DepthBounds::of(fs);
    return storage;
}

struct WboitSums {
    Spectrum3 accum;
    Spectrum3 weight;
    Spectrum3 reveal = Spectrum3::splat(1.0);
};

WboitSums wboit_sums(const FragmentStream& fs, const DepthBounds& bounds, CubeMode cube,
                     const WboitWeight& weight) {
    WboitSums sums;
    for (const Fragment& f : fs) {
        const double w = weight(normalize_depth(f.depth, bounds));
        const Spectrum3 t = fragment_transmittance(f, cube);
        sums.accum += f.radiance * (w * f.alpha);
        sums.weight += (Spectrum3::splat(1.0) - t) * w;
        sums.reveal *= t;
    }
    return sums;
}

}  // namespace

Spectrum3 abuffer_composite(const FragmentStream& fs, const Spectrum3& background, CubeMode cube) {
    Spectrum3 color;
    Spectrum3 through = Spectrum3::splat(1.0);
    for (const Fragment& f : sorted_by_depth(fs)) {
        color += f.radiance * f.alpha * through;
        through *= fragment_transmittance(f, cube);
    }
    return color + background * through;
}

double WboitWeight::operator()(double z) const {
    const double z2 = z * z;
    return std::clamp(scale / (1e-5 + z2 + z2 * z2 * z2), lo, hi);
}

Spectrum3 wboit_composite(const FragmentStream& fs, const Spectrum3& background, const DepthBounds& bounds,
                          CubeMode cube, const WboitWeight& weight) {
    if (fs.empty()) {
        return background;
    }
    DepthBounds storage;
    const WboitSums s = wboit_sums(fs, bounds_or(fs, bounds, storage), cube, weight);
    Spectrum3 out;
    for (std::size_t c = 0; c < 3; ++c) {
        out[c] = s.accum[c] / std::max(kWeightFloor, s.weight[c]) * (1.0 - s.reveal[c]) +
                 background[c] * s.reveal[c];
    }
    return out;
}

Spectrum3 wboit_effective_visibility(const FragmentStream& fs, double x, const DepthBounds& bounds,
                                     CubeMode cube, const WboitWeight& weight) {
    if (fs.empty()) {
        return Spectrum3::splat(1.0);
    }
    DepthBounds storage;
    const DepthBounds& b = bounds_or(fs, bounds, storage);
    const WboitSums s = wboit_sums(fs, b, cube, weight);
    const double w = weight(normalize_depth(std::clamp(x, b.near(), b.far()), b));
    Spectrum3 v;
    for (std::size_t c = 0; c < 3; ++c) {
        v[c] = std::clamp(w * (1.0 - s.reveal[c]) / std::max(kWeightFloor, s.weight[c]), 0.0, 1.0);
    }
    return v;
}

std::vector<MlabNode> mlab_nodes(const FragmentStream& fs, int slots, CubeMode cube) {
    if (slots < 2) {
        throw std::invalid_argument("MLAB needs at least two slots");
    }
    std::vector<MlabNode> nodes;
    nodes.reserve(static_cast<std::size_t>(slots) + 1);
    for (const Fragment& f : fs) {
        MlabNode node{f.radiance * f.alpha, fragment_transmittance(f, cube), f.depth};
        // upper_bound keeps equal depths in submission order.
        auto at = std::upper_bound(nodes.begin(), nodes.end(), node.depth,
                                   [](double d, const MlabNode& n) { return d < n.depth; });
        nodes.insert(at, node);
        if (nodes.size() > static_cast<std::size_t>(slots)) {
            MlabNode& near = nodes[nodes.size() - 2];
            const MlabNode& far = nodes.back();
            near.color += near.transmittance * far.color;
            near.transmittance *= far.transmittance;
            nodes.pop_back();
        }
    }
    return nodes;
}

Spectrum3 mlab_composite(const FragmentStream& fs, const Spectrum3& background, int slots, CubeMode cube) {
    Spectrum3 color;
    Spectrum3 through = Spectrum3::splat(1.0);
    for (const MlabNode& n : mlab_nodes(fs, slots, cube)) {
        color += n.color * through;
        through *= n.transmittance;
    }
    return color + background * through;
}

Spectrum3 mlab_visibility(const std::vector<MlabNode>& nodes, double x) {
    Spectrum3 v = Spectrum3::splat(1.0);
    for (const MlabNode& n : nodes) {
        if (!(n.depth < x)) {
            break;
        }
        v *= n.transmittance;
    }
    return v;
}

}  // namespace woit
