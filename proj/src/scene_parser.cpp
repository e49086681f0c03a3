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

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "woit/scene.hpp"

namespace woit {

namespace {

class LineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double parse_number(std::string_view text, std::string_view key) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw LineError("bad number '" + std::string(text) + "' for " + std::string(key));
    }
    return value;
}

std::vector<double> parse_list(std::string_view text, std::string_view key) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t stop = comma == std::string_view::npos ? text.size() : comma;
        values.push_back(parse_number(text.substr(start, stop - start), key));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return values;
}

// key=value pairs of one line; every key must be consumed.
class Fields {
public:
    Fields(const std::vector<std::string>& tokens, std::size_t first) {
        for (std::size_t i = first; i < tokens.size(); ++i) {
            const std::size_t eq = tokens[i].find('=');
            if (eq == std::string::npos || eq == 0) {
                throw LineError("expected key=value, got '" + tokens[i] + "'");
            }
            const std::string key = tokens[i].substr(0, eq);
            if (!values_.emplace(key, tokens[i].substr(eq + 1)).second) {
                throw LineError("duplicate key '" + key + "'");
            }
        }
    }

    std::optional<std::string> text(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) {
            return std::nullopt;
        }
        used_.insert(key);
        return it->second;
    }

    std::optional<double> number(const std::string& key) {
        auto t = text(key);
        return t ? std::optional<double>(parse_number(*t, key)) : std::nullopt;
    }

    double number(const std::string& key, double fallback) { return number(key).value_or(fallback); }

    std::optional<Vec3> vec3(const std::string& key) {
        auto t = text(key);
        if (!t) {
            return std::nullopt;
        }
        const std::vector<double> v = parse_list(*t, key);
        if (v.size() != 3) {
            throw LineError(key + " needs three comma-separated values");
        }
        return Vec3{v[0], v[1], v[2]};
    }

    std::optional<Spectrum3> spectrum(const std::string& key) {
        auto v = vec3(key);
        return v ? std::optional<Spectrum3>(Spectrum3{v->x, v->y, v->z}) : std::nullopt;
    }

    Spectrum3 spectrum(const std::string& key, const Spectrum3& fallback) {
        return spectrum(key).value_or(fallback);
    }

    void finish() const {
        for (const auto& [key, value] : values_) {
            if (used_.count(key) == 0) {
                throw LineError("unknown key '" + key + "'");
            }
        }
    }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

Material parse_material(Fields& fields) {
    Material m;
    m.alpha = fields.number("alpha", m.alpha);
    m.transmission = fields.spectrum("transmission", m.transmission);
    m.radiance = fields.spectrum("radiance", m.radiance);
    m.ior = fields.number("ior", m.ior);
    if (!(m.alpha >= 0.0 && m.alpha <= 1.0)) {
        throw LineError("alpha must lie in [0, 1]");
    }
    for (std::size_t c = 0; c < 3; ++c) {
        if (!(m.transmission[c] >= 0.0 && m.transmission[c] <= 1.0)) {
            throw LineError("transmission must lie in [0, 1]");
        }
    }
    if (!(m.ior >= 1.0)) {
        throw LineError("ior must be >= 1");
    }
    return m;
}

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> tokens;
    std::istringstream in{std::string(line)};
    std::string token;
    while (in >> token) {
        tokens.push_back(token);
    }
    return tokens;
}

}  // namespace

Scene parse_scene(std::string_view text, const std::filesystem::path& base_dir) {
    Scene scene;
    // Planes given by distance along the camera axis resolve once the camera is known.
    std::vector<std::pair<std::size_t, double>> facing_planes;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t stop = text.find('\n', start);
        if (stop == std::string_view::npos) {
            stop = text.size();
        }
        std::string_view line = text.substr(start, stop - start);
        start = stop + 1;
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty()) {
            continue;
        }
        const std::string& kind = tokens[0];
        try {
            if (kind == "seed" && tokens.size() == 2 && tokens[1].find('=') == std::string::npos) {
                scene.rng_seed = std::stoull(tokens[1]);
                continue;
            }
            Fields f(tokens, 1);
            if (kind == "seed") {
                scene.rng_seed = static_cast<std::uint64_t>(f.number("value", 1.0));
            } else if (kind == "camera") {
                scene.camera.position = f.vec3("position").value_or(scene.camera.position);
                scene.camera.forward = f.vec3("forward").value_or(scene.camera.forward);
                scene.camera.up = f.vec3("up").value_or(scene.camera.up);
                scene.camera.fov_y_degrees = f.number("fov", scene.camera.fov_y_degrees);
            } else if (kind == "background") {
                scene.background.color = f.spectrum("color", scene.background.color);
                scene.background.color2 = f.spectrum("color2", scene.background.color);
                scene.background.checker_pixels = static_cast<int>(f.number("cell", 0.0));
                scene.fallback_depth = f.number("depth", scene.fallback_depth);
                if (auto image = f.text("image")) {
                    scene.background.image = std::make_shared<const Image>(read_ppm(base_dir / *image));
                }
            } else if (kind == "plane") {
                PlanePrimitive p;
                const std::optional<double> d = f.number("d");
                p.center = f.vec3("center").value_or(p.center);
                p.normal = f.vec3("normal").value_or(p.normal);
                if (auto size = f.text("size")) {
                    const std::vector<double> v = parse_list(*size, "size");
                    if (v.size() != 2) {
                        throw LineError("size needs two comma-separated values");
                    }
                    p.half_extent = {v[0], v[1]};
                }
                p.material = parse_material(f);
                if (length(p.normal) == 0.0) {
                    throw LineError("plane normal must be nonzero");
                }
                p.normal = normalize(p.normal);
                if (d) {
                    facing_planes.emplace_back(scene.primitives.size(), *d);
                }
                scene.primitives.push_back(p);
            } else if (kind == "sphere") {
                SpherePrimitive s;
                s.center = f.vec3("center").value_or(s.center);
                s.radius = f.number("radius", s.radius);
                s.material = parse_material(f);
                if (!(s.radius > 0.0)) {
                    throw LineError("sphere radius must be positive");
                }
                scene.primitives.push_back(s);
            } else if (kind == "particles") {
                ParticleCloud c;
                c.center = f.vec3("center").value_or(c.center);
                c.radius = f.number("radius", c.radius);
                c.count = static_cast<int>(f.number("count", c.count));
                c.particle_size = f.number("size", c.particle_size);
                c.brightness_jitter = f.number("jitter", c.brightness_jitter);
                if (auto falloff = f.text("falloff")) {
                    if (*falloff == "gaussian") {
                        c.falloff = ParticleFalloff::gaussian;
                    } else if (*falloff == "soft") {
                        c.falloff = ParticleFalloff::soft_edge;
                    } else {
                        throw LineError("falloff must be gaussian or soft");
                    }
                }
                c.material = parse_material(f);
                if (c.count < 0 || !(c.particle_size > 0.0)) {
                    throw LineError("particles need count >= 0 and size > 0");
                }
                scene.primitives.push_back(c);
            } else if (kind == "fog") {
                FogSlab s;
                s.near = f.number("near", s.near);
                s.far = f.number("far", s.far);
                s.sigma = f.spectrum("sigma", s.sigma);
                s.radiance = f.spectrum("radiance", s.radiance);
                s.slices = static_cast<int>(f.number("slices", s.slices));
                if (s.slices < 1 || s.far < s.near || s.sigma.r < 0.0 || s.sigma.g < 0.0 || s.sigma.b < 0.0) {
                    throw LineError("fog needs slices >= 1, far >= near and sigma >= 0");
                }
                scene.primitives.push_back(s);
            } else if (kind == "backdrop") {
                OpaqueBackdrop b;
                b.distance = f.number("d", b.distance);
                b.color = f.spectrum("color", b.color);
                b.color2 = f.spectrum("color2", b.color);
                b.checker_size = f.number("checker", 0.0);
                scene.primitives.push_back(b);
            } else {
                throw LineError("unknown primitive '" + kind + "'");
            }
            f.finish();
        } catch (const std::exception& e) {
            throw std::runtime_error("scene line " + std::to_string(line_no) + ": " + e.what());
        }
    }

    const CameraFrame frame = camera_frame(scene.camera);
    for (const auto& [index, distance] : facing_planes) {
        auto& plane = std::get<PlanePrimitive>(scene.primitives[index]);
        plane.center = scene.camera.position + frame.forward * distance;
        plane.normal = -frame.forward;
    }
    return scene;
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open scene file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scene(text.str(), path.parent_path());
}

Scene resolve_scene(const std::string& name_or_path) {
    for (const std::string& name : preset_names()) {
        if (name == name_or_path) {
            return preset(name);
        }
    }
    if (std::filesystem::is_regular_file(name_or_path)) {
        return load_scene(name_or_path);
    }
    return preset(name_or_path);  // throws with the list of presets
}

}  // namespace woit
