#include "glvr/render.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <string>
#include <thread>

#include "glvr/error.hpp"

namespace glvr {

std::string_view to_string(RenderMode mode) { return mode == RenderMode::vanilla ? "vanilla" : "gl"; }

RenderMode parse_render_mode(std::string_view text) {
    if (text == "vanilla") return RenderMode::vanilla;
    if (text == "gl") return RenderMode::gl;
    throw UsageError("mode must be 'vanilla' or 'gl', got '" + std::string(text) + "'");
}

void RenderConfig::validate() const {
    if (n_samples < 1) throw UsageError("n must be >= 1, got " + std::to_string(n_samples));
    if (mode == RenderMode::gl && n_samples > kMaxRuleSize)
        throw UsageError("n must be <= " + std::to_string(kMaxRuleSize) + " in gl mode, got " +
                         std::to_string(n_samples));
    if (delta_t && !(*delta_t > 0.0 && std::isfinite(*delta_t)))
        throw UsageError("dt must be a positive finite step, got " + std::to_string(*delta_t));
    if (march_divisions < 1) throw UsageError("march_divisions must be >= 1");
    if (threads < 0) throw UsageError("threads must be >= 0");
    for (int i = 0; i < 3; ++i)
        if (!(background[i] >= 0.0 && background[i] <= 1.0))
            throw UsageError("background channels must lie in [0, 1]");
}

GlSelection select_gl_points(const Ray& ray, const Field& field, const QuadratureRule& rule, double delta_t,
                             CallCounts& counts, SelectOptions options) {
    GlSelection sel;
    const int n = rule.size();
    const auto nodes = rule.nodes();
    const auto weights = rule.weights();
    sel.points.reserve(static_cast<std::size_t>(n));

    int next = 0;
    double depth = 0.0;  // x = -log T
    const std::int64_t steps = march_step_count(ray.span(), delta_t);
    for (std::int64_t k = 0; k < steps && next < n; ++k) {
        const double t = ray.t_min + static_cast<double>(k) * delta_t;
        // The literal variant always advances a full step; the default clips
        // the last step at t_max.
        const double h = options.literal_pseudocode || k + 1 < steps ? delta_t : ray.t_max - t;
        const double sigma = density_at(field, ray.at(t), counts);
        ++sel.march_steps;
        if (options.record_trace) sel.depth_trace.push_back(depth);
        const double depth_next = depth + h * sigma;

        if (options.literal_pseudocode) {
            if (depth < nodes[static_cast<size_t>(next)] && depth_next >= nodes[static_cast<size_t>(next)]) {
                const double frac = (nodes[static_cast<size_t>(next)] - depth) / (depth_next - depth);
                sel.points.push_back({t + frac * delta_t - delta_t, next, weights[static_cast<size_t>(next)]});
                ++next;
            }
        } else {
            // Several nodes may fall inside one step on dense media.
            while (next < n && depth_next >= nodes[static_cast<size_t>(next)]) {
                const double frac = (nodes[static_cast<size_t>(next)] - depth) / (depth_next - depth);
                sel.points.push_back({t + frac * h, next, weights[static_cast<size_t>(next)]});
                ++next;
            }
        }
        depth = depth_next;
    }
    if (options.record_trace) sel.depth_trace.push_back(depth);

    for (int k = next; k < n; ++k) sel.bg_weight += weights[static_cast<size_t>(k)];
    return sel;
}

Rgb render_pixel_vanilla(const Ray& ray, const Field& field, const RenderConfig& config, CallCounts& counts) {
    const int n = config.n_samples;
    const double delta = ray.span() / n;
    double transmittance = 1.0;
    Rgb color;
    for (int i = 0; i < n; ++i) {
        const Vec3 p = ray.at(ray.t_min + i * delta);
        const double sigma = density_at(field, p, counts);
        const Rgb c = color_at(field, p, ray.dir, counts);
        const double alpha = 1.0 - std::exp(-sigma * delta);
        color += c * (transmittance * alpha);
        transmittance *= 1.0 - alpha;
    }
    color += config.background * transmittance;
    return clamp01(color);
}

Rgb render_pixel_gl(const Ray& ray, const Field& field, const QuadratureRule& rule, const RenderConfig& config,
                    CallCounts& counts) {
    const double step = config.step_for(ray.span());
    const GlSelection sel =
        select_gl_points(ray, field, rule, step, counts, {.literal_pseudocode = config.literal_pseudocode});
    Rgb color;
    for (const SelectedPoint& pt : sel.points) color += color_at(field, ray.at(pt.t), ray.dir, counts) * pt.weight;
    color += config.background * sel.bg_weight;
    return clamp01(color);
}

Rgb render_ray(Ray ray, const Field& field, const QuadratureRule* rule, const RenderConfig& config,
               CallCounts& counts, bool* hit) {
    const auto span = ray_aabb(ray, field.bounds());
    if (hit) *hit = span.has_value();
    if (!span) return config.background;
    ray.t_min = span->lo;
    ray.t_max = span->hi;
    if (config.mode == RenderMode::vanilla) return render_pixel_vanilla(ray, field, config, counts);
    return render_pixel_gl(ray, field, *rule, config, counts);
}

RenderResult render_image(const Field& field, const Camera& camera, const RenderConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    std::optional<QuadratureRule> rule;
    if (config.mode == RenderMode::gl) rule = laguerre_rule(config.n_samples);

    RenderResult result{ImageBuffer(camera.width(), camera.height()), {}};
    const int height = camera.height();
    unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
    workers = std::clamp(workers, 1u, static_cast<unsigned>(height));

    struct WorkerStats {
        CallCounts counts;
        std::uint64_t missed = 0;
    };
    std::vector<WorkerStats> per_worker(workers);
    std::atomic<int> next_row{0};

    auto work = [&](WorkerStats& ws) {
        for (int y = next_row.fetch_add(1); y < height; y = next_row.fetch_add(1)) {
            for (int x = 0; x < camera.width(); ++x) {
                bool hit = false;
                const Rgb c = render_ray(generate_ray(camera, x, y), field, rule ? &*rule : nullptr, config,
                                         ws.counts, &hit);
                if (!hit) ++ws.missed;
                result.image.set(x, y, c);
            }
        }
    };

    if (workers == 1) {
        work(per_worker[0]);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, std::ref(per_worker[w]));
    }

    for (const WorkerStats& ws : per_worker) {
        result.stats.color_calls += ws.counts.color;
        result.stats.density_calls += ws.counts.density;
        result.stats.rays_missed += ws.missed;
    }
    result.stats.rays_total = result.image.pixel_count();
    result.stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

RenderResult render_image(const Scene& scene, const Camera& camera, const RenderConfig& config) {
    return render_image(*scene.field, camera, config);
}

}  // namespace glvr
