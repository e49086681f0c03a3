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

#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "woit/metrics.hpp"
#include "woit/parallel.hpp"
#include "woit/pipeline.hpp"
#include "woit/scene.hpp"

namespace woit::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RenderOptions {
    std::string scene;
    std::string method = "wavelet";
    int rank = 3;
    int width = 256;
    int height = 256;
    std::string refraction = "off";
    std::string aberration = "off";
    std::string cube = "off";
    std::string packed = "off";
    std::string normalize = "on";
    std::string ramp = "normalized";
    int taps = 5;
    double refraction_scale = 0.0;
    double wboit_scale = 10.0;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shuffle;
    int workers = 0;
};

const std::vector<std::string> kOnOff{"on", "off"};

void add_scene_flags(CLI::App* cmd, RenderOptions& o) {
    cmd->add_option("--scene", o.scene, "Preset name or scene file")->required();
    cmd->add_option("--rank", o.rank, "Wavelet rank N (2^(N+1) coefficients per channel)")
        ->check(CLI::Range(0, kMaxRank));
    cmd->add_option("--width", o.width, "Image width")->check(CLI::PositiveNumber);
    cmd->add_option("--height", o.height, "Image height")->check(CLI::PositiveNumber);
    cmd->add_option("--cube", o.cube, "Cube transmission of refractive fragments: on, off, back")
        ->check(CLI::IsMember({"on", "off", "back"}));
    cmd->add_option("--seed", o.seed, "Override the scene RNG seed");
    cmd->add_option("--workers", o.workers, "Worker threads (default: $WOIT_WORKERS or all cores)");
    cmd->add_option("--wboit-scale", o.wboit_scale, "Numerator of the WBOIT depth weight");
}

void add_render_flags(CLI::App* cmd, RenderOptions& o) {
    add_scene_flags(cmd, o);
    cmd->add_option("--refraction", o.refraction)->check(CLI::IsMember(kOnOff));
    cmd->add_option("--aberration", o.aberration)->check(CLI::IsMember(kOnOff));
    cmd->add_option("--packed", o.packed, "Round-trip coefficients through E5B9G9R9")
        ->check(CLI::IsMember(kOnOff));
    cmd->add_option("--normalize", o.normalize, "Weighted-average compositing")->check(CLI::IsMember(kOnOff));
    cmd->add_option("--taps", o.taps, "Chromatic aberration taps (odd, >= 3)");
    cmd->add_option("--ramp", o.ramp, "Spectral tap ramp")->check(CLI::IsMember({"normalized", "literal"}));
    cmd->add_option("--refraction-scale", o.refraction_scale, "Pixels per world unit of deviation");
    cmd->add_option("--shuffle", o.shuffle, "Permute every fragment stream with this seed");
}

Method method_or_usage(const std::string& name) {
    if (auto m = parse_method(name)) {
        return *m;
    }
    throw UsageError("unknown method '" + name + "' (expected wavelet, abuffer, wboit or mlab4)");
}

std::vector<Method> methods_or_usage(const std::string& list) {
    std::vector<Method> methods;
    std::stringstream in(list);
    std::string name;
    while (std::getline(in, name, ',')) {
        methods.push_back(method_or_usage(name));
    }
    if (methods.empty()) {
        throw UsageError("no methods given");
    }
    return methods;
}

Scene scene_or_usage(const RenderOptions& o) {
    Scene scene;
    try {
        scene = resolve_scene(o.scene);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (o.seed) {
        scene.rng_seed = *o.seed;
    }
    return scene;
}

CubeMode cube_mode(const std::string& v) {
    if (v == "on") return CubeMode::refractive;
    if (v == "back") return CubeMode::refractive_back_faces;
    return CubeMode::off;
}

RenderConfig make_config(const RenderOptions& o, Method method) {
    RenderConfig cfg;
    cfg.method = method;
    cfg.rank = o.rank;
    cfg.width = o.width;
    cfg.height = o.height;
    cfg.refraction = o.refraction == "on";
    cfg.chromatic_aberration = o.aberration == "on";
    cfg.cube = cube_mode(o.cube);
    cfg.packed_storage = o.packed == "on";
    cfg.normalize = o.normalize == "on";
    cfg.aberration_taps = o.taps;
    cfg.ramp = o.ramp == "literal" ? SpectralRamp::literal : SpectralRamp::normalized;
    cfg.refraction_scale = o.refraction_scale;
    cfg.wboit.scale = o.wboit_scale;
    cfg.workers = resolve_workers(o.workers);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

RasterizedScene raster_for(const Scene& scene, const RenderConfig& cfg, const RenderOptions& o) {
    RasterizedScene raster = rasterize(scene, cfg.width, cfg.height, cfg.workers);
    if (o.shuffle) {
        shuffle_fragments(raster, *o.shuffle);
    }
    return raster;
}

std::string fixed6(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

// Writes to `path`, or to `out` when path is "-".
template <typename Fn>
void with_output(const std::string& path, std::ostream& out, Fn&& write) {
    if (path == "-") {
        write(out);
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    write(file);
    if (!file) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

CurveChannel channel_of(const std::string& v) {
    if (v == "r") return CurveChannel::r;
    if (v == "g") return CurveChannel::g;
    if (v == "b") return CurveChannel::b;
    return CurveChannel::luminance;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wavelet order-independent transparency reference renderer", "woit"};
    app.require_subcommand(1);

    RenderOptions opts;
    std::string methods_list = "wavelet";
    std::string out_path = "-";
    std::string pixel_text;
    std::string channel = "lum";
    std::size_t samples = 512;

    CLI::App* graph = app.add_subcommand("graph", "Visibility curves along one pixel's ray (CSV)");
    add_scene_flags(graph, opts);
    graph->add_option("--methods", methods_list, "Comma-separated methods");
    graph->add_option("--samples", samples, "Curve samples")->check(CLI::PositiveNumber);
    graph->add_option("--pixel", pixel_text, "Pixel as x,y (default: image centre)");
    graph->add_option("--channel", channel)->check(CLI::IsMember({"lum", "r", "g", "b"}));
    graph->add_option("--out", out_path, "Output CSV ('-' for stdout)");

    CLI::App* render_cmd = app.add_subcommand("render", "Render a scene to a binary PPM");
    add_render_flags(render_cmd, opts);
    render_cmd->add_option("--method", opts.method, "wavelet, abuffer, wboit or mlab4");
    render_cmd->add_option("--out", out_path, "Output PPM")->required();

    CLI::App* compare = app.add_subcommand("compare", "Image and curve error of methods vs the A-buffer");
    add_render_flags(compare, opts);
    compare->add_option("--methods", methods_list, "Comma-separated methods");
    compare->add_option("--out", out_path, "Output CSV ('-' for stdout)");

    CLI::App* bench = app.add_subcommand("bench", "Timing and coefficient-traffic accounting");
    add_render_flags(bench, opts);
    bench->add_option("--method", opts.method, "Must be wavelet");

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "woit: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (graph->parsed()) {
            const std::vector<Method> methods = methods_or_usage(methods_list);
            const Scene scene = scene_or_usage(opts);
            int px = opts.width / 2;
            int py = opts.height / 2;
            if (!pixel_text.empty()) {
                char comma = 0;
                std::istringstream in(pixel_text);
                if (!(in >> px >> comma >> py) || comma != ',') {
                    throw UsageError("--pixel expects x,y");
                }
            }
            if (px < 0 || py < 0 || px >= opts.width || py >= opts.height) {
                throw UsageError("--pixel outside the image");
            }
            const PixelSample sample = cast_fragments(scene, px, py, opts.width, opts.height);
            WboitWeight wboit;
            wboit.scale = opts.wboit_scale;
            const CurveSet curves = visibility_curves(sample.fragments, methods, opts.rank, samples,
                                                      channel_of(channel), cube_mode(opts.cube), wboit);
            with_output(out_path, out, [&](std::ostream& csv) {
                csv << "z,truth";
                for (const auto& [m, c] : curves.methods) {
                    csv << ',' << to_string(m);
                }
                csv << '\n';
                for (std::size_t i = 0; i < curves.truth.size(); ++i) {
                    csv << fixed6(curves.truth[i].z) << ',' << fixed6(curves.truth[i].v);
                    for (const auto& [m, c] : curves.methods) {
                        csv << ',' << fixed6(c[i].v);
                    }
                    csv << '\n';
                }
            });
            return kExitOk;
        }

        if (render_cmd->parsed()) {
            const RenderConfig cfg = make_config(opts, method_or_usage(opts.method));
            const Scene scene = scene_or_usage(opts);
            const Image image = render(raster_for(scene, cfg, opts), cfg);
            write_ppm(out_path, image);
            return kExitOk;
        }

        if (compare->parsed()) {
            const std::vector<Method> methods =
                methods_or_usage(compare->count("--methods") != 0 ? methods_list : "wavelet,wboit,mlab4");
            const Scene scene = scene_or_usage(opts);
            const RenderConfig ref_cfg = make_config(opts, Method::abuffer);
            const RasterizedScene raster = raster_for(scene, ref_cfg, opts);
            const Image reference = render(raster, ref_cfg);
            const CurveSet curves = visibility_curves(raster.at(ref_cfg.width / 2, ref_cfg.height / 2).fragments,
                                                      methods, ref_cfg.rank, 512, CurveChannel::luminance,
                                                      ref_cfg.cube, ref_cfg.wboit, ref_cfg.mlab_slots);
            with_output(out_path, out, [&](std::ostream& csv) {
                csv << "method,rmse,psnr,curve_l1,curve_l2,curve_linf\n";
                for (std::size_t i = 0; i < methods.size(); ++i) {
                    const Image image = render(raster, make_config(opts, methods[i]));
                    const CurveError ce = curve_error(curves.methods[i].second, curves.truth);
                    csv << to_string(methods[i]) << ',' << fixed6(image_rmse(image, reference)) << ','
                        << fixed6(image_psnr(image, reference)) << ',' << fixed6(ce.l1) << ',' << fixed6(ce.l2)
                        << ',' << fixed6(ce.linf) << '\n';
                }
            });
            return kExitOk;
        }

        if (bench->parsed()) {
            if (method_or_usage(opts.method) != Method::wavelet) {
                throw UsageError("bench measures the wavelet method only");
            }
            const RenderConfig cfg = make_config(opts, Method::wavelet);
            const Scene scene = scene_or_usage(opts);
            const RasterizedScene raster = raster_for(scene, cfg, opts);
            PipelineStats stats;
            const auto start = std::chrono::steady_clock::now();
            render(raster, cfg, &stats);
            const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;

            const double per_insert =
                stats.inserts == 0 ? 0.0 : static_cast<double>(stats.insert_touches) / stats.inserts;
            const double per_node =
                stats.eval_nodes == 0 ? 0.0 : static_cast<double>(stats.eval_slot_reads) / stats.eval_nodes;
            out << "scene: " << opts.scene << "\n"
                << "rank: " << cfg.rank << "\n"
                << "resolution: " << cfg.width << "x" << cfg.height << "\n"
                << "workers: " << cfg.workers << "\n"
                << "wall_ms: " << fixed6(elapsed.count()) << "\n"
                << "fragments: " << stats.fragments << "\n"
                << "inserts: " << stats.inserts << "\n"
                << "touches_per_insert: " << per_insert << "\n"
                << "eval_nodes: " << stats.eval_nodes << "\n"
                << "touches_per_eval_node: " << per_node << "\n"
                << "expected_touches: " << cfg.rank + 2 << "\n"
                << "coefficients_per_pixel: " << 3 * coefficient_count(cfg.rank) << "\n"
                << "bytes_per_pixel: " << packed_bytes_per_pixel(cfg.rank) << "\n";
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "woit: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "woit: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace woit::cli
