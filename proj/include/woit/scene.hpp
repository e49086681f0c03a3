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

// Analytic scenes and per-pixel fragment generation by ray casting.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "woit/core.hpp"
#include "woit/image.hpp"

namespace woit {

struct Material {
    double alpha = 1.0;
    Spectrum3 transmission{0.0, 0.0, 0.0};
    Spectrum3 radiance{0.0, 0.0, 0.0};
    double ior = 1.0;
};

/// Transparent plane. Unbounded when half_extent is zero, otherwise a
/// rectangle of half-size (half_extent.x, half_extent.y) in the plane's
/// tangent frame.
struct PlanePrimitive {
    Vec3 center{0.0, 0.0, 1.0};
    Vec3 normal{0.0, 0.0, -1.0};
    Vec2 half_extent{};
    Material material;
};

struct SpherePrimitive {
    Vec3 center{0.0, 0.0, 3.0};
    double radius = 1.0;
    Material material;
};

enum class ParticleFalloff {
    gaussian,   ///< alpha * exp(-r^2 / (2 sigma^2)), sigma = size / 3
    soft_edge,  ///< alpha inside 0.8 * size, linear ramp to zero at the rim
};

/// Camera-facing discs placed uniformly in a sphere from the scene seed.
struct ParticleCloud {
    Vec3 center{0.0, 0.0, 3.0};
    double radius = 1.0;
    int count = 64;
    double particle_size = 0.2;
    ParticleFalloff falloff = ParticleFalloff::gaussian;
    double brightness_jitter = 0.0;  ///< relative radiance variation per particle
    Material material;
};

/// Homogeneous medium between two planes perpendicular to the camera axis.
struct FogSlab {
    double near = 1.0;  ///< distance along the camera axis
    double far = 2.0;
    Spectrum3 sigma{0.1, 0.1, 0.1};  ///< extinction per world unit
    Spectrum3 radiance{0.0, 0.0, 0.0};  ///< in-scattered fog colour
    int slices = 32;
};

/// Opaque wall perpendicular to the camera axis, optionally checkered.
struct OpaqueBackdrop {
    double distance = 5.0;
    Spectrum3 color{0.8, 0.8, 0.8};
    Spectrum3 color2{0.8, 0.8, 0.8};
    double checker_size = 0.0;  ///< world units; 0 = solid
};

using Primitive = std::variant<PlanePrimitive, SpherePrimitive, ParticleCloud, FogSlab, OpaqueBackdrop>;

struct Camera {
    Vec3 position{0.0, 0.0, 0.0};
    Vec3 forward{0.0, 0.0, 1.0};
    Vec3 up{0.0, 1.0, 0.0};
    double fov_y_degrees = 40.0;
};

/// Colour seen where a ray hits nothing opaque.
struct Background {
    Spectrum3 color{0.5, 0.5, 0.5};
    Spectrum3 color2{0.5, 0.5, 0.5};
    int checker_pixels = 0;                  ///< screen-space checker cell; 0 = solid
    std::shared_ptr<const Image> image;      ///< stretched over the frame when set
};

struct Scene {
    Camera camera;
    std::vector<Primitive> primitives;
    Background background;
    std::uint64_t rng_seed = 1;
    double fallback_depth = 100.0;  ///< depth of the background plane for rays that miss
};

struct Ray {
    Vec3 origin;
    Vec3 direction;  ///< unit length
};

/// Right/up/forward frame of the camera.
struct CameraFrame {
    Vec3 right;
    Vec3 up;
    Vec3 forward;
};

CameraFrame camera_frame(const Camera& camera);

/// Primary ray through the centre of pixel (px, py).
Ray primary_ray(const Camera& camera, int px, int py, int width, int height);

struct PixelSample {
    FragmentStream fragments;  ///< submission order
    double opaque_depth = 0.0;  ///< ray distance of the opaque hit, or fallback depth
    bool opaque_hit = false;
    Spectrum3 opaque_color;
};

/// Intersects the pixel's primary ray with every primitive. Transparent hits
/// in front of the nearest opaque hit become fragments in primitive order.
PixelSample cast_fragments(const Scene& scene, int px, int py, int width, int height);

struct Particle {
    Vec3 position;
    double brightness = 1.0;
};

std::vector<Particle> generate_particles(const ParticleCloud& cloud, std::uint64_t seed);

/// Scene with particle clouds resolved once, for casting many pixels.
class SceneCaster {
public:
    explicit SceneCaster(const Scene& scene);

    PixelSample cast(int px, int py, int width, int height) const;
    const Scene& scene() const { return scene_; }

private:
    const Scene& scene_;
    std::vector<std::vector<Particle>> particles_;  // per primitive; empty for non-clouds
};

/// Slices the ray segment [a, b] through `slab` into `slab.slices` fragments
/// at the sub-segment midpoints. Their transmittances multiply to
/// exp(-sigma * (b - a)).
FragmentStream slice_fog(const FogSlab& slab, double a, double b, const Vec3& direction);

/// Names accepted by preset().
const std::vector<std::string>& preset_names();

/// Canonical scenes. Throws std::invalid_argument listing valid names.
Scene preset(std::string_view name);

/// Parses the line-oriented scene format (see README). Throws
/// std::runtime_error with a line number on malformed input.
Scene parse_scene(std::string_view text, const std::filesystem::path& base_dir = {});
Scene load_scene(const std::filesystem::path& path);

/// Preset name or path to a scene file.
Scene resolve_scene(const std::string& name_or_path);

}  // namespace woit
