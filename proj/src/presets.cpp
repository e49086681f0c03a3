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

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "woit/scene.hpp"

// Preset constants are stand-ins chosen to reproduce the character of each
// visibility function (discrete glass steps, exponential fog, particle
// clusters), not measurements of any particular asset.

namespace woit {

namespace {

PlanePrimitive facing_plane(double distance, const Material& m) {
    PlanePrimitive p;
    p.center = {0.0, 0.0, distance};
    p.normal = {0.0, 0.0, -1.0};
    p.material = m;
    return p;
}

Scene single_plane() {
    // 25% coverage plane 1m from the camera over an orange wall.
    Scene s;
    s.primitives.push_back(facing_plane(1.0, {0.25, {0.0, 0.0, 0.0}, {0.9, 0.9, 0.9}, 1.0}));
    s.primitives.push_back(OpaqueBackdrop{3.0, {1.0, 0.45, 0.1}, {1.0, 0.45, 0.1}, 0.0});
    return s;
}

Scene wine_bottle() {
    // Glass shell around a wine volume: the centre ray crosses air->glass,
    // glass->wine, wine->glass and glass->air before reaching the wall.
    Scene s;
    const Material glass{1.0, {0.9, 0.94, 0.92}, {0.06, 0.07, 0.08}, 1.5};
    const Material wine{1.0, {0.55, 0.08, 0.12}, {0.05, 0.0, 0.01}, 1.33};
    s.primitives.push_back(SpherePrimitive{{0.0, 0.0, 2.5}, 0.5, glass});
    s.primitives.push_back(SpherePrimitive{{0.0, 0.0, 2.5}, 0.45, wine});
    s.primitives.push_back(OpaqueBackdrop{4.0, {0.85, 0.82, 0.75}, {0.55, 0.52, 0.45}, 0.25});
    return s;
}

Scene car_fog() {
    // Fog outside a car, clear air between the two windows.
    Scene s;
    const Spectrum3 sigma{0.11, 0.115, 0.125};
    const Spectrum3 fog_color{0.7, 0.72, 0.76};
    s.primitives.push_back(FogSlab{0.5, 2.6, sigma, fog_color, 32});
    PlanePrimitive front = facing_plane(2.6, {1.0, {0.7, 0.75, 0.78}, {0.08, 0.09, 0.1}, 1.5});
    front.half_extent = {1.2, 0.5};
    s.primitives.push_back(front);
    PlanePrimitive back = facing_plane(4.4, {1.0, {0.72, 0.76, 0.8}, {0.07, 0.08, 0.09}, 1.5});
    back.half_extent = {1.3, 0.55};
    s.primitives.push_back(back);
    s.primitives.push_back(FogSlab{4.4, 9.0, sigma, fog_color, 32});
    s.primitives.push_back(OpaqueBackdrop{9.5, {0.25, 0.3, 0.25}, {0.15, 0.18, 0.15}, 0.8});
    return s;
}

Scene smoke_fire() {
    Scene s;
    s.rng_seed = 7;
    ParticleCloud smoke;
    smoke.center = {-0.35, 0.15, 3.2};
    smoke.radius = 0.65;
    smoke.count = 160;
    smoke.particle_size = 0.3;
    smoke.brightness_jitter = 0.25;
    smoke.material = {0.55, {0.0, 0.0, 0.0}, {0.32, 0.32, 0.34}, 1.0};
    ParticleCloud fire;
    fire.center = {0.4, -0.15, 4.2};
    fire.radius = 0.55;
    fire.count = 140;
    fire.particle_size = 0.28;
    fire.brightness_jitter = 0.35;
    fire.material = {0.7, {0.0, 0.0, 0.0}, {1.0, 0.45, 0.1}, 1.0};
    s.primitives.push_back(smoke);
    s.primitives.push_back(fire);
    s.primitives.push_back(OpaqueBackdrop{6.0, {0.9, 0.5, 0.15}, {0.7, 0.35, 0.1}, 0.5});
    return s;
}

Scene glass_stack() {
    // Eight tinted panes, submitted out of depth order.
    constexpr std::array<Spectrum3, 8> tints{{{0.95, 0.75, 0.75},
                                              {0.75, 0.95, 0.8},
                                              {0.8, 0.8, 0.97},
                                              {0.95, 0.93, 0.7},
                                              {0.7, 0.92, 0.95},
                                              {0.93, 0.75, 0.93},
                                              {0.85, 0.85, 0.85},
                                              {0.97, 0.85, 0.7}}};
    constexpr std::array<Spectrum3, 8> sheen{{{0.18, 0.05, 0.05},
                                              {0.05, 0.16, 0.06},
                                              {0.05, 0.06, 0.2},
                                              {0.2, 0.18, 0.04},
                                              {0.04, 0.17, 0.19},
                                              {0.18, 0.05, 0.17},
                                              {0.12, 0.12, 0.12},
                                              {0.22, 0.12, 0.04}}};
    constexpr std::array<double, 8> depth{2.0, 2.18, 2.47, 2.61, 2.93, 3.22, 3.36, 3.75};
    constexpr std::array<int, 8> submission{3, 0, 6, 1, 7, 4, 2, 5};

    Scene s;
    for (const int i : submission) {
        PlanePrimitive pane;
        pane.center = {0.12 * ((i * 3) % 5 - 2), 0.1 * ((i * 5) % 4 - 1.5), depth[static_cast<std::size_t>(i)]};
        pane.normal = normalize(Vec3{0.08, 0.05, -1.0});
        pane.half_extent = {0.55 + 0.05 * (i % 3), 0.45 + 0.04 * (i % 4)};
        pane.material = {1.0, tints[static_cast<std::size_t>(i)], sheen[static_cast<std::size_t>(i)], 1.5};
        s.primitives.push_back(pane);
    }
    s.primitives.push_back(OpaqueBackdrop{5.0, {0.9, 0.9, 0.9}, {0.15, 0.15, 0.15}, 0.3});
    return s;
}

Scene leaves() {
    Scene s;
    s.rng_seed = 11;
    ParticleCloud foliage;
    foliage.center = {0.0, 0.0, 3.0};
    foliage.radius = 0.9;
    foliage.count = 90;
    foliage.particle_size = 0.22;
    foliage.falloff = ParticleFalloff::soft_edge;
    foliage.brightness_jitter = 0.4;
    foliage.material = {1.0, {0.0, 0.0, 0.0}, {0.15, 0.45, 0.1}, 1.0};
    s.primitives.push_back(foliage);
    s.primitives.push_back(OpaqueBackdrop{6.0, {0.55, 0.7, 0.9}, {0.55, 0.7, 0.9}, 0.0});
    return s;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"single-plane", "wine-bottle", "car-fog",
                                                "smoke-fire",   "glass-stack", "leaves"};
    return names;
}

Scene preset(std::string_view name) {
    if (name == "single-plane") return single_plane();
    if (name == "wine-bottle") return wine_bottle();
    if (name == "car-fog") return car_fog();
    if (name == "smoke-fire") return smoke_fire();
    if (name == "glass-stack") return glass_stack();
    if (name == "leaves") return leaves();

    std::string message = "unknown preset '" + std::string(name) + "'; valid presets:";
    for (const std::string& n : preset_names()) {
        message += " " + n;
    }
    throw std::invalid_argument(message);
}

}  // namespace woit
