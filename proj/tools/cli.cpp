#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glvr/error.hpp"
#include "glvr/metrics.hpp"
#include "glvr/quadrature.hpp"
#include "glvr/render.hpp"
#include "glvr/scene.hpp"
#include "glvr/verify.hpp"

namespace glvr::cli {

namespace {

struct Common {
    std::string scene;
    int camera = 0;
    std::optional<double> dt;
    int threads = -1;
};

int resolve_threads(int flag) {
    if (flag >= 0) return flag;
    if (const char* env = std::getenv("GLVR_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 0) return v;
        } catch (const std::exception&) {
        }
        throw UsageError("GLVR_THREADS must be a non-negative integer, got '" + std::string(env) + "'");
    }
    return 0;
}

RenderConfig base_config(const Scene& scene, const Common& c) {
    RenderConfig cfg = scene.defaults;
    if (c.dt) cfg.delta_t = c.dt;
    cfg.threads = resolve_threads(c.threads);
    return cfg;
}

std::string dt_label(const RenderConfig& cfg) {
    if (!cfg.delta_t) return "auto";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", *cfg.delta_t);
    return buf;
}

// Writes CSV text to `path`, or to `out` when path is empty.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw IoError("failed writing '" + path + "'");
}

int cmd_render(const Common& c, const std::string& mode, int n, const std::string& out_path, std::ostream& out) {
    const Scene scene = load_scene(c.scene);
    RenderConfig cfg = base_config(scene, c);
    cfg.mode = parse_render_mode(mode);
    cfg.n_samples = n;
    cfg.validate();
    const RenderResult r = render_image(scene, scene.camera(c.camera), cfg);
    write_image(out_path, r.image);
    out << r.stats.color_calls << ',' << r.stats.density_calls << ',' << format_number(r.stats.wall_ms()) << '\n';
    return kOk;
}

int cmd_compare(const Common& c, int baseline_n, const std::vector<int>& gl_ns, const std::string& out_path,
                std::ostream& out) {
    const Scene scene = load_scene(c.scene);
    RenderConfig base = base_config(scene, c);
    base.mode = RenderMode::vanilla;
    base.n_samples = baseline_n;
    base.validate();
    std::vector<RenderConfig> gl_cfgs;
    for (int n : gl_ns) {
        RenderConfig g = base;
        g.mode = RenderMode::gl;
        g.n_samples = n;
        g.validate();
        gl_cfgs.push_back(g);
    }
    const Camera& cam = scene.camera(c.camera);
    const RenderResult ref = render_image(scene, cam, base);

    std::ostringstream csv;
    csv << kCsvHeader << '\n';
    const auto row = [&](const RenderConfig& cfg, const RenderResult& r) {
        const CompareReport rep = compare_report(ref.image, r.image, ref.stats, r.stats);
        CsvRow line{scene.name, std::string(to_string(cfg.mode)), cfg.n_samples,
                    cfg.mode == RenderMode::vanilla ? "-" : dt_label(cfg), rep.psnr_db, rep.ssim,
                    r.stats.color_calls, r.stats.density_calls, r.stats.wall_ms()};
        csv << format_csv_row(line) << '\n';
    };
    row(base, ref);
    for (const RenderConfig& g : gl_cfgs) row(g, render_image(scene, cam, g));
    emit(csv.str(), out_path, out);
    return kOk;
}

int cmd_quad_table(const std::string& kind, int n, const std::string& format, std::ostream& out) {
    RuleKind k;
    if (kind == "laguerre")
        k = RuleKind::laguerre;
    else if (kind == "legendre")
        k = RuleKind::legendre;
    else
        throw UsageError("kind must be 'laguerre' or 'legendre', got '" + kind + "'");
    if (format != "csv" && format != "text") throw UsageError("format must be 'csv' or 'text'");
    const QuadratureRule rule = make_rule(k, n);
    char buf[128];
    if (format == "text") {
        std::snprintf(buf, sizeof buf, "%5s  %25s  %25s\n", "i", "x_i", "w_i");
        out << buf;
    }
    for (int i = 0; i < rule.size(); ++i) {
        if (format == "csv")
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", i + 1, rule.node(i), rule.weight(i));
        else
            std::snprintf(buf, sizeof buf, "%5d  %25.17g  %25.17g\n", i + 1, rule.node(i), rule.weight(i));
        out << buf;
    }
    return kOk;
}

int cmd_verify_color(const Common& c, const std::vector<int>& pixel, int degree, const std::string& channel,
                     const std::string& out_path, std::ostream& out) {
    if (pixel.size() != 2) throw UsageError("pixel must be given as px,py");
    int ch = 0;
    if (channel == "r")
        ch = 0;
    else if (channel == "g")
        ch = 1;
    else if (channel == "b")
        ch = 2;
    else
        throw UsageError("channel must be r, g or b");
    const Scene scene = load_scene(c.scene);
    const RenderConfig cfg = base_config(scene, c);
    Ray ray = generate_ray(scene.camera(c.camera), pixel[0], pixel[1]);
    const auto span = ray_aabb(ray, scene.field->bounds());
    if (!span || !(span->hi > span->lo))
        throw DomainError("ray through pixel (" + std::to_string(pixel[0]) + ", " + std::to_string(pixel[1]) +
                          ") misses the scene");
    ray.t_min = span->lo;
    ray.t_max = span->hi;
    CallCounts counts;
    const auto profile = color_profile(ray, *scene.field, cfg.step_for(ray.span()), ch, counts);
    const auto support = profile_support(profile);
    if (support.empty()) throw DomainError("ray through the pixel crosses no density; the color profile is empty");
    const auto samples = depth_value_pairs(support);
    const PolyFit fit = polyfit(samples, degree);

    std::ostringstream csv;
    csv << "x,c,fit,residual\n";
    char buf[160];
    for (const auto& [x, y] : samples) {
        const double f = fit(x);
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", x, y, f, y - f);
        csv << buf;
    }
    std::snprintf(buf, sizeof buf, "# degree=%d samples=%zu relative_error=%.9g\n", degree, samples.size(),
                  fit.relative_error);
    csv << buf;
    emit(csv.str(), out_path, out);
    return kOk;
}

int cmd_bench(const Common& c, int repeat, const std::string& out_path, std::ostream& out) {
    if (repeat < 1) throw UsageError("repeat must be >= 1");
    const Scene scene = load_scene(c.scene);
    const RenderConfig base = base_config(scene, c);
    const Camera& cam = scene.camera(c.camera);
    struct Setting {
        RenderMode mode;
        int n;
    };
    const Setting settings[] = {{RenderMode::vanilla, 128}, {RenderMode::vanilla, 4096}, {RenderMode::gl, 4}, {RenderMode::gl, 8}};

    struct Result {
        RenderConfig cfg;
        RenderResult last;
        double median_ms;
    };
    std::vector<Result> results;
    for (const Setting& s : settings) {
        RenderConfig cfg = base;
        cfg.mode = s.mode;
        cfg.n_samples = s.n;
        cfg.validate();
        std::vector<double> times;
        RenderResult last;
        for (int i = 0; i < repeat; ++i) {
            last = render_image(scene, cam, cfg);
            times.push_back(last.stats.wall_ms());
        }
        std::sort(times.begin(), times.end());
        const std::size_t m = times.size() / 2;
        const double median = times.size() % 2 ? times[m] : 0.5 * (times[m - 1] + times[m]);
        results.push_back({cfg, std::move(last), median});
    }
    const ImageBuffer& reference = results[1].last.image;  // vanilla N=4096

    std::ostringstream csv;
    csv << kCsvHeader << '\n';
    for (const Result& r : results) {
        CsvRow line{scene.name, std::string(to_string(r.cfg.mode)), r.cfg.n_samples,
                    r.cfg.mode == RenderMode::vanilla ? "-" : dt_label(r.cfg), psnr(reference, r.last.image),
                    ssim(reference, r.last.image), r.last.stats.color_calls, r.last.stats.density_calls, r.median_ms};
        csv << format_csv_row(line) << '\n';
    }
    emit(csv.str(), out_path, out);
    return kOk;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--scene", c.scene, "Scene JSON file")->required();
    sub->add_option("--camera", c.camera, "Camera index")->required();
    sub->add_option("--dt", c.dt, "March step in world units (default: span / 1024)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gauss-Laguerre volume renderer"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--threads", common.threads, "Worker threads (0 = auto; env GLVR_THREADS)");

    std::string mode, out_path, kind = "laguerre", format = "csv", channel = "r";
    int n = 0, baseline_n = 0, degree = 7, repeat = 3;
    std::vector<int> gl_ns, pixel;

    CLI::App* render = app.add_subcommand("render", "Render one camera to an image");
    add_common(render, common);
    render->add_option("--mode", mode, "vanilla | gl")->required();
    render->add_option("--n", n, "Sample count N (vanilla) or node count n (gl)")->required();
    render->add_option("--out", out_path, "Output image (.ppm or .png)")->required();

    CLI::App* compare = app.add_subcommand("compare", "Compare GL renders against a vanilla baseline");
    add_common(compare, common);
    compare->add_option("--baseline-n", baseline_n, "Vanilla sample count")->required();
    compare->add_option("--gl-n", gl_ns, "Comma-separated GL node counts")->required()->delimiter(',');
    compare->add_option("--out", out_path, "CSV report path (default: stdout)");

    CLI::App* quad = app.add_subcommand("quad-table", "Print quadrature nodes and weights");
    quad->add_option("--kind", kind, "laguerre | legendre");
    quad->add_option("--n", n, "Number of nodes (1..64)")->required();
    quad->add_option("--format", format, "csv | text");

    CLI::App* verify = app.add_subcommand("verify-color", "Fit a polynomial to a ray's color profile");
    add_common(verify, common);
    verify->add_option("--pixel", pixel, "Pixel as px,py")->required()->delimiter(',')->expected(2);
    verify->add_option("--degree", degree, "Polynomial degree")->required();
    verify->add_option("--channel", channel, "r | g | b");
    verify->add_option("--out", out_path, "CSV output path (default: stdout)");

    CLI::App* bench = app.add_subcommand("bench", "Time vanilla and GL renders");
    add_common(bench, common);
    bench->add_option("--repeat", repeat, "Repetitions per setting")->required();
    bench->add_option("--out", out_path, "CSV output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*render) return cmd_render(common, mode, n, out_path, out);
        if (*compare) return cmd_compare(common, baseline_n, gl_ns, out_path, out);
        if (*quad) return cmd_quad_table(kind, n, format, out);
        if (*verify) return cmd_verify_color(common, pixel, degree, channel, out_path, out);
        if (*bench) return cmd_bench(common, repeat, out_path, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kDomain;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    }
    return kUsage;
}

}  // namespace glvr::cli
