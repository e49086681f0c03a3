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

#include "woit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>

#include "woit/parallel.hpp"

namespace woit {

namespace {

constexpr double kAccumWeightFloor = 1e-12;

// Runs `per_pixel(x, y, stats)` over all pixels, rows split across workers,
// then folds the per-worker stats into fb.stats.
template <typename PerPixel>
void for_each_pixel(FrameBuffers& fb, int workers, PerPixel per_pixel) {
    std::mutex merge;
    parallel_for(fb.height, workers, [&](int row_begin, int row_end) {
        PipelineStats local;
        for (int y = row_begin; y < row_end; ++y) {
            for (int x = 0; x < fb.width; ++x) {
                per_pixel(x, y, local);
            }
        }
        const std::lock_guard<std::mutex> lock(merge);
        fb.stats += local;
    });
}

double smoothstep(double edge0, double edge1, double x) {
    const double u = std::clamp((x - edge0) / (edge1 - edge0), 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
        case Method::wavelet: return "wavelet";
        case Method::abuffer: return "abuffer";
        case Method::wboit: return "wboit";
        case Method::mlab4: return "mlab4";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) {
    for (const Method m : {Method::wavelet, Method::abuffer, Method::wboit, Method::mlab4}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    return std::nullopt;
}

void RenderConfig::validate() const {
    if (rank < 0 || rank > kMaxRank) {
        throw std::invalid_argument("rank must be in [0, " + std::to_string(kMaxRank) + "]");
    }
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    if (aberration_taps < 3 || aberration_taps % 2 == 0) {
        throw std::invalid_argument("aberration taps must be odd and >= 3");
    }
    if (mlab_slots < 2) {
        throw std::invalid_argument("MLAB needs at least two slots");
    }
    if (workers < 1) {
        throw std::invalid_argument("workers must be >= 1");
    }
}

double RenderConfig::effective_refraction_scale() const {
    return refraction_scale > 0.0 ? refraction_scale : 40.0 * width / 512.0;
}

PipelineStats& PipelineStats::operator+=(const PipelineStats& o) {
    fragments += o.fragments;
    inserts += o.inserts;
    insert_touches += o.insert_touches;
    eval_nodes += o.eval_nodes;
    eval_slot_reads += o.eval_slot_reads;
    return *this;
}

int resolve_workers(int requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("WOIT_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return n;
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

RasterizedScene rasterize(const Scene& scene, int width, int height, int workers) {
    RasterizedScene raster;
    raster.width = width;
    raster.height = height;
    raster.camera = scene.camera;
    raster.pixels.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    const SceneCaster caster(scene);
    parallel_for(height, workers, [&](int row_begin, int row_end) {
        for (int y = row_begin; y < row_end; ++y) {
            for (int x = 0; x < width; ++x) {
                raster.at(x, y) = caster.cast(x, y, width, height);
            }
        }
    });
    return raster;
}

void shuffle_fragments(RasterizedScene& raster, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (PixelSample& p : raster.pixels) {
        std::shuffle(p.fragments.begin(), p.fragments.end(), rng);
    }
}

FrameBuffers::FrameBuffers(int w, int h, int rank)
    : width(w),
      height(h),
      bounds(static_cast<std::size_t>(w) * h),
      wavelets(static_cast<std::size_t>(w) * h, WaveletBuffer(rank)),
      accum(static_cast<std::size_t>(w) * h),
      accum_weight(static_cast<std::size_t>(w) * h),
      refraction_offset(static_cast<std::size_t>(w) * h),
      opaque_depth(static_cast<std::size_t>(w) * h),
      opaque(w, h),
      output(w, h) {}

WaveletBuffer build_pixel_wavelets(const FragmentStream& fs, const DepthBounds& bounds, int rank, CubeMode cube,
                                   bool packed) {
    WaveletBuffer buffer(rank);
    for (const Fragment& f : fs) {
        add_interface(buffer, wavelet_depth(f.depth, bounds, rank), fragment_channel_absorbance(f, cube));
    }
    return packed ? unpack_pixel(pack_pixel(buffer)) : buffer;
}

void step1_depth_bounds(const RasterizedScene& raster, FrameBuffers& fb, const RenderConfig& cfg) {
    for_each_pixel(fb, cfg.workers, [&](int x, int y, PipelineStats& stats) {
        const PixelSample& px = raster.at(x, y);
        const std::size_t i = fb.index(x, y);
        fb.bounds[i] = DepthBounds::of(px.fragments);
        fb.opaque.at(x, y) = px.opaque_color;
        fb.opaque_depth[i] = px.opaque_depth;
        stats.fragments += px.fragments.size();
    });
}

void step2_build(const RasterizedScene& raster, FrameBuffers& fb, const RenderConfig& cfg) {
    if (cfg.method != Method::wavelet) {
        return;
    }
    for_each_pixel(fb, cfg.workers, [&](int x, int y, PipelineStats& stats) {
        const std::size_t i = fb.index(x, y);
        const FragmentStream& fs = raster.at(x, y).fragments;
        if (fb.bounds[i].empty()) {
            return;
        }
        WaveletBuffer& buffer = fb.wavelets[i];
        for (const Fragment& f : fs) {
            const double z = wavelet_depth(f.depth, fb.bounds[i], cfg.rank);
            stats.insert_touches +=
                static_cast<std::uint64_t>(add_interface(buffer, z, fragment_channel_absorbance(f, cfg.cube)));
            ++stats.inserts;
        }
        if (cfg.packed_storage) {
            buffer = unpack_pixel(pack_pixel(buffer));
        }
    });
}

void step3_accumulate(const RasterizedScene& raster, FrameBuffers& fb, const RenderConfig& cfg) {
    const CameraFrame frame = camera_frame(raster.camera);
    const double scale = cfg.effective_refraction_scale();
    for_each_pixel(fb, cfg.workers, [&](int x, int y, PipelineStats& stats) {
        const std::size_t i = fb.index(x, y);
        const FragmentStream& fs = raster.at(x, y).fragments;
        if (fb.bounds[i].empty()) {
            return;
        }
        const Ray ray = primary_ray(raster.camera, x, y, raster.width, raster.height);
        for (const Fragment& f : fs) {
            if (cfg.method == Method::wavelet) {
                EvalTrace trace;
                const double z = wavelet_depth(f.depth, fb.bounds[i], cfg.rank);
                const Spectrum3 v =
                    evaluate_visibility_before(fb.wavelets[i], z, fragment_channel_absorbance(f, cfg.cube), &trace);
                stats.eval_nodes += trace.nodes;
                stats.eval_slot_reads += trace.slot_reads;
                fb.accum[i] += f.radiance * f.alpha * v;
                fb.accum_weight[i] += (Spectrum3::splat(1.0) - fragment_transmittance(f, cfg.cube)) * v;
            }
            if (cfg.refraction && f.ior > 1.0) {
                fb.refraction_offset[i] += refraction_offset(f, ray, frame, fb.opaque_depth[i], scale);
            }
        }
    });
}

const Image& step4_composite(const RasterizedScene& raster, FrameBuffers& fb, const RenderConfig& cfg) {
    for_each_pixel(fb, cfg.workers, [&](int x, int y, PipelineStats& stats) {
        const std::size_t i = fb.index(x, y);
        const Vec2 offset = fb.refraction_offset[i];
        const Vec2 pixel{static_cast<double>(x), static_cast<double>(y)};
        const Spectrum3 background =
            cfg.chromatic_aberration
                ? chromatic_gather(fb.opaque, pixel, offset, cfg.aberration_taps, cfg.ramp)
                : fb.opaque.sample_bilinear(pixel.x + offset.x, pixel.y + offset.y);
        Spectrum3& out = fb.output.at(x, y);
        const FragmentStream& fs = raster.at(x, y).fragments;
        if (fs.empty()) {
            out = background;
            return;
        }
        switch (cfg.method) {
            case Method::wavelet: {
                EvalTrace trace;
                const Spectrum3 v_total = total_visibility(fb.wavelets[i], &trace);
                stats.eval_nodes += trace.nodes;
                stats.eval_slot_reads += trace.slot_reads;
                for (std::size_t c = 0; c < 3; ++c) {
                    const double transparent =
                        cfg.normalize ? fb.accum[i][c] / std::max(kAccumWeightFloor, fb.accum_weight[i][c]) *
                                            (1.0 - v_total[c])
                                      : fb.accum[i][c];
                    out[c] = transparent + background[c] * v_total[c];
                }
                break;
            }
            case Method::abuffer:
                out = abuffer_composite(fs, background, cfg.cube);
                break;
            case Method::wboit:
                out = wboit_composite(fs, background, fb.bounds[i], cfg.cube, cfg.wboit);
                break;
            case Method::mlab4:
                out = mlab_composite(fs, background, cfg.mlab_slots, cfg.cube);
                break;
        }
    });
    return fb.output;
}

Image render(const RasterizedScene& raster, const RenderConfig& cfg, PipelineStats* stats) {
    cfg.validate();
    if (raster.width != cfg.width || raster.height != cfg.height) {
        throw std::invalid_argument("rasterized scene size does not match the render config");
    }
    FrameBuffers fb(cfg.width, cfg.height, cfg.rank);
    step1_depth_bounds(raster, fb, cfg);
    step2_build(raster, fb, cfg);
    step3_accumulate(raster, fb, cfg);
    step4_composite(raster, fb, cfg);
    if (stats != nullptr) {
        *stats = fb.stats;
    }
    return std::move(fb.output);
}

Image render(const Scene& scene, const RenderConfig& cfg, PipelineStats* stats) {
    cfg.validate();
    return render(rasterize(scene, cfg.width, cfg.height, cfg.workers), cfg, stats);
}

std::optional<Vec3> refract(const Vec3& incident, const Vec3& normal, double eta) {
    const double cos_i = -dot(normal, incident);
    const double k = 1.0 - eta * eta * (1.0 - cos_i * cos_i);
    if (k < 0.0) {
        return std::nullopt;
    }
    return incident * eta + normal * (eta * cos_i - std::sqrt(k));
}

Vec2 refraction_offset(const Fragment& f, const Ray& ray, const CameraFrame& frame, double opaque_depth,
                       double pixels_per_unit) {
    if (!(f.ior > 1.0)) {
        return {};
    }
    const Vec3 facing = dot(f.normal, ray.direction) > 0.0 ? -f.normal : f.normal;
    const std::optional<Vec3> bent = refract(ray.direction, facing, 1.0 / f.ior);
    if (!bent) {
        return {};
    }
    const Vec3 start = ray.origin + ray.direction * f.depth;
    const Vec3 target = ray.origin + ray.direction * opaque_depth;
    const double along = dot(*bent, frame.forward);
    if (along <= 1e-9) {
        return {};
    }
    const double s = dot(target - start, frame.forward) / along;
    if (s < 0.0) {
        return {};
    }
    const Vec3 delta = start + *bent * s - target;
    return {dot(delta, frame.right) * pixels_per_unit, -dot(delta, frame.up) * pixels_per_unit};
}

Spectrum3 spectral_weight(int tap, int taps, SpectralRamp ramp) {
    if (taps < 2 || tap < 0 || tap >= taps) {
        throw std::out_of_range("spectral tap index out of range");
    }
    const double step = static_cast<double>(tap) / static_cast<double>(taps - 1);
    const double t = ramp == SpectralRamp::normalized ? step : 0.5 + 2.0 * step;
    Spectrum3 w;
    w.r = smoothstep(0.5, 1.0 / 3.0, t);
    w.b = smoothstep(0.5, 2.0 / 3.0, t);
    w.g = 1.0 - w.r - w.b;
    return w;
}

Spectrum3 chromatic_gather(const Image& background, Vec2 pixel, Vec2 offset, int taps, SpectralRamp ramp) {
    if (taps < 3 || taps % 2 == 0) {
        throw std::invalid_argument("aberration taps must be odd and >= 3");
    }
    const Spectrum3 centre = background.sample_bilinear(pixel.x + offset.x, pixel.y + offset.y);
    if (offset.x == 0.0 && offset.y == 0.0) {
        return centre;
    }
    Spectrum3 sum;
    Spectrum3 weight;
    for (int i = 0; i < taps; ++i) {
        const double u = 2.0 * i / (taps - 1);
        const Spectrum3 w = spectral_weight(i, taps, ramp);
        sum += w * background.sample_bilinear(pixel.x + offset.x * u, pixel.y + offset.y * u);
        weight += w;
    }
    Spectrum3 out;
    for (std::size_t c = 0; c < 3; ++c) {
        // A channel with no weight on any tap keeps the plain refracted sample.
        out[c] = weight[c] > 0.0 ? sum[c] / weight[c] : centre[c];
    }
    return out;
}

}  // namespace woit
