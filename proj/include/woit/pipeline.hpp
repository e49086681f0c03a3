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

// Four-pass transparency renderer over a framebuffer:
//   1. per-pixel depth bounds of transparent fragments
//   2. wavelet coefficient build (one additive update per fragment)
//   3. shading weighted by reconstructed visibility, plus refraction offsets
//   4. composite over the (optionally refracted, dispersed) opaque image
// The baseline methods share passes 1, 3 (offsets only) and 4.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "woit/baselines.hpp"
#include "woit/core.hpp"
#include "woit/image.hpp"
#include "woit/scene.hpp"
#include "woit/wavelet.hpp"

namespace woit {

enum class Method { wavelet, abuffer, wboit, mlab4 };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

/// Tap parameter of the dispersion ramp: t = i / (k - 1) (normalized), or
/// t = 0.5 + 2i / (k - 1) (literal, kept for comparison).
enum class SpectralRamp { normalized, literal };

struct RenderConfig {
    Method method = Method::wavelet;
    int rank = 3;
    int width = 256;
    int height = 256;
    bool refraction = false;
    bool chromatic_aberration = false;
    CubeMode cube = CubeMode::off;
    bool normalize = true;
    bool packed_storage = false;
    int aberration_taps = 5;
    double refraction_scale = 0.0;  ///< pixels per world unit; <= 0 selects 40 * width / 512
    SpectralRamp ramp = SpectralRamp::normalized;
    WboitWeight wboit;
    int mlab_slots = 4;
    int workers = 1;

    /// Throws std::invalid_argument on out-of-range settings.
    void validate() const;
    double effective_refraction_scale() const;
};

/// Fragment streams cast once per pixel; every pass reads from here.
struct RasterizedScene {
    int width = 0;
    int height = 0;
    Camera camera;
    std::vector<PixelSample> pixels;

    const PixelSample& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    PixelSample& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

RasterizedScene rasterize(const Scene& scene, int width, int height, int workers = 1);

/// Randomly permutes every pixel's fragment stream (deterministic in `seed`).
void shuffle_fragments(RasterizedScene& raster, std::uint64_t seed);

struct PipelineStats {
    std::uint64_t fragments = 0;
    std::uint64_t inserts = 0;
    std::uint64_t insert_touches = 0;
    std::uint64_t eval_nodes = 0;
    std::uint64_t eval_slot_reads = 0;

    PipelineStats& operator+=(const PipelineStats& o);
};

struct FrameBuffers {
    FrameBuffers(int width, int height, int rank);

    int width;
    int height;
    std::vector<DepthBounds> bounds;
    std::vector<WaveletBuffer> wavelets;
    std::vector<Spectrum3> accum;
    std::vector<Spectrum3> accum_weight;
    std::vector<Vec2> refraction_offset;
    std::vector<double> opaque_depth;
    Image opaque;
    Image output;
    PipelineStats stats;

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

void step1_depth_bounds(const RasterizedScene& raster, FrameBuffers& fb, const RenderConfig& cfg);
void step2_build(const RasterizedScene& raster, FrameBuffers& fb, const RenderConfig& cfg);
void step3_accumulate(const RasterizedScene& raster, FrameBuffers& fb, const RenderConfig& cfg);
const Image& step4_composite(const RasterizedScene& raster, FrameBuffers& fb, const RenderConfig& cfg);

/// Runs all four passes. `stats`, when given, receives the instrumentation.
Image render(const RasterizedScene& raster, const RenderConfig& cfg, PipelineStats* stats = nullptr);
Image render(const Scene& scene, const RenderConfig& cfg, PipelineStats* stats = nullptr);

/// Wavelet coefficients for one pixel's stream, as pass 2 builds them.
WaveletBuffer build_pixel_wavelets(const FragmentStream& fs, const DepthBounds& bounds, int rank,
                                   CubeMode cube = CubeMode::off, bool packed = false);

/// Snell refraction of unit `incident` through unit `normal` facing against
/// it, with eta = n_incident / n_transmitted. Empty on total internal
/// reflection.
std::optional<Vec3> refract(const Vec3& incident, const Vec3& normal, double eta);

/// Screen-space displacement (pixels) of the refracted ray's hit on the plane
/// through the pixel's opaque point, perpendicular to the camera axis.
/// Refracts with eta = 1 / ior at the viewer-facing normal.
Vec2 refraction_offset(const Fragment& f, const Ray& ray, const CameraFrame& frame, double opaque_depth,
                       double pixels_per_unit);

/// Per-channel weight of tap i of k; components in [0, 1] summing to 1.
Spectrum3 spectral_weight(int tap, int taps, SpectralRamp ramp = SpectralRamp::normalized);

/// k bilinear taps along pixel + offset * (2i / (k - 1)), i = 0..k-1: the
/// centre tap is the refracted sample, the ends sit at +-offset around it.
/// Each channel is normalized by its own weight sum.
Spectrum3 chromatic_gather(const Image& background, Vec2 pixel, Vec2 offset, int taps,
                           SpectralRamp ramp = SpectralRamp::normalized);

}  // namespace woit
