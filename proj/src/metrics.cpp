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

#include "woit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace woit {

CurveError curve_error(const VisibilityCurve& approx, const VisibilityCurve& truth) {
    if (approx.size() != truth.size()) {
        throw std::invalid_argument("curves have different sample counts");
    }
    CurveError e;
    e.samples = approx.size();
    if (e.samples == 0) {
        return e;
    }
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        if (std::abs(approx[i].z - truth[i].z) > 1e-12) {
            throw std::invalid_argument("curves are sampled on different z grids");
        }
        const double d = std::abs(approx[i].v - truth[i].v);
        e.l1 += d;
        sum_sq += d * d;
        e.linf = std::max(e.linf, d);
    }
    const auto n = static_cast<double>(e.samples);
    e.l1 /= n;
    e.l2 = std::sqrt(sum_sq / n);
    return e;
}

double image_rmse(const Image& a, const Image& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw std::invalid_argument("image dimensions differ");
    }
    double sum_sq = 0.0;
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        for (std::size_t c = 0; c < 3; ++c) {
            const double d = pa[i][c] - pb[i][c];
            sum_sq += d * d;
        }
    }
    return pa.empty() ? 0.0 : std::sqrt(sum_sq / (3.0 * static_cast<double>(pa.size())));
}

double image_psnr(const Image& a, const Image& b) {
    const double rmse = image_rmse(a, b);
    if (rmse == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 20.0 * std::log10(1.0 / rmse);
}

namespace {

double reduce(const Spectrum3& v, CurveChannel channel) {
    switch (channel) {
        case CurveChannel::r: return v.r;
        case CurveChannel::g: return v.g;
        case CurveChannel::b: return v.b;
        case CurveChannel::luminance: return std::clamp(luminance(v), 0.0, 1.0);
    }
    return 0.0;
}

}  // namespace

CurveSet visibility_curves(const FragmentStream& fs, std::span<const Method> methods, int rank,
                           std::size_t samples, CurveChannel channel, CubeMode cube, const WboitWeight& wboit,
                           int mlab_slots) {
    CurveSet set;
    set.bounds = DepthBounds::of(fs);
    const std::vector<double> grid = uniform_grid(samples);

    auto sample = [&](auto&& fn) {
        std::vector<CurveSample> out;
        out.reserve(samples);
        for (const double z : grid) {
            out.push_back({z, set.bounds.empty() ? 1.0 : reduce(fn(z), channel)});
        }
        return VisibilityCurve(std::move(out));
    };
    auto world = [&](double z) { return world_depth_from_wavelet(z, set.bounds, rank); };

    set.truth = sample([&](double z) { return exact_visibility(fs, world(z), cube); });

    WaveletBuffer buffer(rank);
    std::vector<MlabNode> nodes;
    if (!set.bounds.empty()) {
        buffer = build_pixel_wavelets(fs, set.bounds, rank, cube);
        nodes = mlab_nodes(fs, mlab_slots, cube);
        for (const Fragment& f : fs) {
            if (f.kind == FragmentKind::surface) {
                set.surface_steps.push_back(wavelet_depth(f.depth, set.bounds, rank));
            }
        }
        std::sort(set.surface_steps.begin(), set.surface_steps.end());
    }

    for (const Method m : methods) {
        switch (m) {
            case Method::wavelet:
                set.methods.emplace_back(m, sample([&](double z) { return evaluate_visibility(buffer, z); }));
                break;
            case Method::abuffer:
                set.methods.emplace_back(m, set.truth);
                break;
            case Method::wboit:
                set.methods.emplace_back(m, sample([&](double z) {
                                             return wboit_effective_visibility(fs, world(z), set.bounds, cube, wboit);
                                         }));
                break;
            case Method::mlab4:
                set.methods.emplace_back(m, sample([&](double z) { return mlab_visibility(nodes, world(z)); }));
                break;
        }
    }
    return set;
}

}  // namespace woit
