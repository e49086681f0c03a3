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

#include "woit/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace woit {

namespace {

constexpr double kHitEpsilon = 1e-9;

struct TangentFrame {
    Vec3 u;
    Vec3 v;
};

TangentFrame tangent_frame(const Vec3& n) {
    const Vec3 helper = std::abs(n.y) < 0.9 ? Vec3{0.0, 1.0, 0.0} : Vec3{1.0, 0.0, 0.0};
    const Vec3 u = normalize(cross(helper, n));
    return {u, cross(n, u)};
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Fragment make_fragment(double depth, const Material& m, const Vec3& normal, bool back_face) {
    Fragment f;
    f.depth = depth;
    f.alpha = m.alpha;
    f.transmission = m.transmission;
    f.radiance = m.radiance;
    f.normal = normal;
    f.ior = m.ior;
    f.back_face = back_face;
    return f;
}

double particle_alpha(const ParticleCloud& cloud, double r) {
    const double size = cloud.particle_size;
    if (r > size) {
        return 0.0;
    }
    switch (cloud.falloff) {
        case ParticleFalloff::gaussian: {
            const double sigma = size / 3.0;
            return cloud.material.alpha * std::exp(-r * r / (2.0 * sigma * sigma));
        }
        case ParticleFalloff::soft_edge: {
            const double inner = 0.8 * size;
            if (r <= inner) {
                return cloud.material.alpha;
            }
            return cloud.material.alpha * (size - r) / (size - inner);
        }
    }
    return 0.0;
}

Spectrum3 background_color(const Background& bg, int px, int py, int width, int height) {
    if (bg.image) {
        const Image& img = *bg.image;
        const double x = (px + 0.5) / width * img.width() - 0.5;
        const double y = (py + 0.5) / height * img.height() - 0.5;
        return img.sample_bilinear(x, y);
    }
    if (bg.checker_pixels <= 0) {
        return bg.color;
    }
    const int parity = (px / bg.checker_pixels + py / bg.checker_pixels) & 1;
    return parity == 0 ? bg.color : bg.color2;
}

}  // namespace

CameraFrame camera_frame(const Camera& camera) {
    const Vec3 forward = normalize(camera.forward);
    const Vec3 right = normalize(cross(camera.up, forward));
    return {right, cross(forward, right), forward};
}

Ray primary_ray(const Camera& camera, int px, int py, int width, int height) {
    const CameraFrame frame = camera_frame(camera);
    const double tan_half = std::tan(0.5 * camera.fov_y_degrees * std::numbers::pi / 180.0);
    const double aspect = static_cast<double>(width) / static_cast<double>(height);
    const double sx = (2.0 * (px + 0.5) / width - 1.0) * tan_half * aspect;
    const double sy = (1.0 - 2.0 * (py + 0.5) / height) * tan_half;
    return {camera.position, normalize(frame.forward + frame.right * sx + frame.up * sy)};
}

FragmentStream slice_fog(const FogSlab& slab, double a, double b, const Vec3& direction) {
    if (slab.slices < 1) {
        throw std::invalid_argument("fog slab needs at least one slice");
    }
    if (b < a) {
        throw std::invalid_argument("fog segment end precedes its start");
    }
    const double step = (b - a) / slab.slices;
    const Spectrum3 t{std::exp(-slab.sigma.r * step), std::exp(-slab.sigma.g * step),
                      std::exp(-slab.sigma.b * step)};
    FragmentStream out;
    out.reserve(static_cast<std::size_t>(slab.slices));
    for (int j = 0; j < slab.slices; ++j) {
        Fragment f;
        f.depth = a + (j + 0.5) * step;
        f.alpha = 1.0;
        f.transmission = t;
        f.radiance = slab.radiance * (Spectrum3::splat(1.0) - t);
        f.normal = -direction;
        f.ior = 1.0;
        f.kind = FragmentKind::medium;
        out.push_back(f);
    }
    return out;
}

std::vector<Particle> generate_particles(const ParticleCloud& cloud, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Particle> particles;
    particles.reserve(static_cast<std::size_t>(std::max(cloud.count, 0)));
    while (particles.size() < static_cast<std::size_t>(std::max(cloud.count, 0))) {
        const Vec3 p{unit(rng), unit(rng), unit(rng)};
        if (dot(p, p) > 1.0) {
            continue;
        }
        const double brightness = 1.0 + cloud.brightness_jitter * unit(rng);
        particles.push_back({cloud.center + p * cloud.radius, brightness});
    }
    return particles;
}

SceneCaster::SceneCaster(const Scene& scene) : scene_(scene) {
    particles_.resize(scene.primitives.size());
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        if (const auto* cloud = std::get_if<ParticleCloud>(&scene.primitives[i])) {
            particles_[i] = generate_particles(*cloud, splitmix64(scene.rng_seed ^ splitmix64(i + 1)));
        }
    }
}

PixelSample SceneCaster::cast(int px, int py, int width, int height) const {
    const Camera& camera = scene_.camera;
    const CameraFrame frame = camera_frame(camera);
    const Ray ray = primary_ray(camera, px, py, width, height);
    const double cos_axis = dot(ray.direction, frame.forward);

    PixelSample out;
    out.opaque_depth = std::numeric_limits<double>::infinity();
    for (const Primitive& prim : scene_.primitives) {
        const auto* wall = std::get_if<OpaqueBackdrop>(&prim);
        if (wall == nullptr || cos_axis <= 0.0) {
            continue;
        }
        const double t = wall->distance / cos_axis;
        if (t > kHitEpsilon && t < out.opaque_depth) {
            out.opaque_depth = t;
            out.opaque_hit = true;
            out.opaque_color = wall->color;
            if (wall->checker_size > 0.0) {
                const Vec3 rel = ray.direction * t;
                const auto cu = static_cast<long long>(std::floor(dot(rel, frame.right) / wall->checker_size));
                const auto cv = static_cast<long long>(std::floor(dot(rel, frame.up) / wall->checker_size));
                out.opaque_color = ((cu + cv) & 1) == 0 ? wall->color : wall->color2;
            }
        }
    }
    if (!out.opaque_hit) {
        out.opaque_depth = scene_.fallback_depth;
        out.opaque_color = background_color(scene_.background, px, py, width, height);
    }
    const double limit = out.opaque_hit ? out.opaque_depth : std::numeric_limits<double>::infinity();

    auto emit = [&](const Fragment& f) {
        if (f.depth > kHitEpsilon && f.depth < limit) {
            out.fragments.push_back(f);
        }
    };

    for (std::size_t i = 0; i < scene_.primitives.size(); ++i) {
        const Primitive& prim = scene_.primitives[i];
        if (const auto* plane = std::get_if<PlanePrimitive>(&prim)) {
            const Vec3 n = normalize(plane->normal);
            const double denom = dot(ray.direction, n);
            if (std::abs(denom) < 1e-12) {
                continue;
            }
            const double t = dot(plane->center - ray.origin, n) / denom;
            if (plane->half_extent.x > 0.0 || plane->half_extent.y > 0.0) {
                const TangentFrame tf = tangent_frame(n);
                const Vec3 local = ray.origin + ray.direction * t - plane->center;
                if (std::abs(dot(local, tf.u)) > plane->half_extent.x ||
                    std::abs(dot(local, tf.v)) > plane->half_extent.y) {
                    continue;
                }
            }
            emit(make_fragment(t, plane->material, n, denom > 0.0));
        } else if (const auto* sphere = std::get_if<SpherePrimitive>(&prim)) {
            const Vec3 oc = ray.origin - sphere->center;
            const double b = dot(oc, ray.direction);
            const double c = dot(oc, oc) - sphere->radius * sphere->radius;
            const double disc = b * b - c;
            if (disc <= 0.0) {
                continue;
            }
            const double root = std::sqrt(disc);
            for (const double t : {-b - root, -b + root}) {
                const Vec3 n = (ray.origin + ray.direction * t - sphere->center) * (1.0 / sphere->radius);
                emit(make_fragment(t, sphere->material, n, dot(n, ray.direction) > 0.0));
            }
        } else if (const auto* cloud = std::get_if<ParticleCloud>(&prim)) {
            if (cos_axis <= 0.0) {
                continue;
            }
            for (const Particle& p : particles_[i]) {
                const double t = dot(p.position - ray.origin, frame.forward) / cos_axis;
                const double r = length(ray.origin + ray.direction * t - p.position);
                const double alpha = particle_alpha(*cloud, r);
                if (alpha <= 1e-4) {
                    continue;
                }
                Material m = cloud->material;
                m.alpha = std::min(alpha, 1.0);
                m.radiance = m.radiance * p.brightness;
                emit(make_fragment(t, m, -frame.forward, false));
            }
        } else if (const auto* fog = std::get_if<FogSlab>(&prim)) {
            if (cos_axis <= 0.0) {
                continue;
            }
            const double a = std::max(fog->near / cos_axis, 0.0);
            const double b = std::min(fog->far / cos_axis, limit);
            if (b > a) {
                for (const Fragment& f : slice_fog(*fog, a, b, ray.direction)) {
                    emit(f);
                }
            }
        }
    }
    return out;
}

PixelSample cast_fragments(const Scene& scene, int px, int py, int width, int height) {
    return SceneCaster(scene).cast(px, py, width, height);
}

}  // namespace woit
