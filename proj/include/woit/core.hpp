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

// Shared value types and the exact per-ray compositing math.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace woit {

/// Per-channel RGB quantity: radiance, or unitless transmittance/absorbance.
struct Spectrum3 {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    constexpr Spectrum3() = default;
    constexpr Spectrum3(double r_, double g_, double b_) : r(r_), g(g_), b(b_) {}
    static constexpr Spectrum3 splat(double v) { return {v, v, v}; }

    constexpr double& operator[](std::size_t c) { return c == 0 ? r : (c == 1 ? g : b); }
    constexpr double operator[](std::size_t c) const { return c == 0 ? r : (c == 1 ? g : b); }

    constexpr Spectrum3& operator+=(const Spectrum3& o) { r += o.r; g += o.g; b += o.b; return *this; }
    constexpr Spectrum3& operator-=(const Spectrum3& o) { r -= o.r; g -= o.g; b -= o.b; return *this; }
    constexpr Spectrum3& operator*=(const Spectrum3& o) { r *= o.r; g *= o.g; b *= o.b; return *this; }
    constexpr Spectrum3& operator*=(double s) { r *= s; g *= s; b *= s; return *this; }

    constexpr double max_component() const { return r > g ? (r > b ? r : b) : (g > b ? g : b); }
    constexpr bool operator==(const Spectrum3&) const = default;
};

constexpr Spectrum3 operator+(Spectrum3 a, const Spectrum3& b) { return a += b; }
constexpr Spectrum3 operator-(Spectrum3 a, const Spectrum3& b) { return a -= b; }
constexpr Spectrum3 operator*(Spectrum3 a, const Spectrum3& b) { return a *= b; }
constexpr Spectrum3 operator*(Spectrum3 a, double s) { return a *= s; }
constexpr Spectrum3 operator*(double s, Spectrum3 a) { return a *= s; }

inline Spectrum3 exp(const Spectrum3& s) { return {std::exp(s.r), std::exp(s.g), std::exp(s.b)}; }

inline bool is_finite(const Spectrum3& s) {
    return std::isfinite(s.r) && std::isfinite(s.g) && std::isfinite(s.b);
}

/// Rec. 709 luma weights.
constexpr double luminance(const Spectrum3& s) { return 0.2126 * s.r + 0.7152 * s.g + 0.0722 * s.b; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalize(const Vec3& v) { return v * (1.0 / length(v)); }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }

enum class FragmentKind { surface, medium };

/// One transparent surface sample on a view ray.
///
/// `radiance` is the surface shading term L_i * r_i; compositing scales it by
/// `alpha`. `back_face` marks hits whose geometric normal points away from the
/// viewer (sphere exits, far sides of panes).
struct Fragment {
    double depth = 1.0;
    double alpha = 1.0;
    Spectrum3 transmission{0.0, 0.0, 0.0};
    Spectrum3 radiance{0.0, 0.0, 0.0};
    Vec3 normal{0.0, 0.0, -1.0};
    double ior = 1.0;
    bool back_face = false;
    FragmentKind kind = FragmentKind::surface;
};

/// Unordered fragments for one pixel.
using FragmentStream = std::vector<Fragment>;

/// Throws std::invalid_argument when a fragment breaks its invariants.
void validate(const Fragment& f);

/// When fragment transmission is cubed (the refraction extinction heuristic).
enum class CubeMode {
    off,
    refractive,             ///< every fragment with ior > 1
    refractive_back_faces,  ///< only back-facing fragments with ior > 1
};

inline constexpr double kTransmittanceFloor = 1e-6;

/// Net per-channel transmittance t_c = 1 - alpha * (1 - T_c).
Spectrum3 fragment_transmittance(const Fragment& f, CubeMode cube = CubeMode::off);

/// a_c = -ln(max(1e-6, t_c)); always >= 0.
Spectrum3 fragment_channel_absorbance(const Fragment& f, CubeMode cube = CubeMode::off);

/// Product of fragment transmittances strictly in front of `x`.
Spectrum3 exact_visibility(const FragmentStream& fs, double x, CubeMode cube = CubeMode::off);

/// Sort by depth, ties kept in submission order.
FragmentStream sorted_by_depth(const FragmentStream& fs);

/// Per-pixel extent of transparent depths. Default-constructed bounds are empty.
class DepthBounds {
public:
    DepthBounds() = default;
    DepthBounds(double near, double far);

    static DepthBounds of(const FragmentStream& fs);

    void include(double depth);
    bool empty() const { return empty_; }
    double near() const { return near_; }
    double far() const { return far_; }

private:
    bool empty_ = true;
    double near_ = std::numeric_limits<double>::infinity();
    double far_ = -std::numeric_limits<double>::infinity();
};

struct CurveSample {
    double z = 0.0;
    double v = 1.0;
};

/// Sampled v(z) over normalized depth. z strictly increasing, v in [0, 1].
class VisibilityCurve {
public:
    VisibilityCurve() = default;
    explicit VisibilityCurve(std::vector<CurveSample> samples);

    const std::vector<CurveSample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    const CurveSample& operator[](std::size_t i) const { return samples_[i]; }

private:
    std::vector<CurveSample> samples_;
};

/// Midpoints of `count` uniform cells on [0, 1).
std::vector<double> uniform_grid(std::size_t count);

}  // namespace woit
