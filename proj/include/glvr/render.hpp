#pragma once

#include <cstdint>
#include <vector>

#include "glvr/field.hpp"
#include "glvr/image.hpp"
#include "glvr/quadrature.hpp"
#include "glvr/ray.hpp"
#include "glvr/render_config.hpp"
#include "glvr/scene.hpp"

namespace glvr {

// A color sample chosen where the accumulated optical depth reaches a
// Laguerre node.
struct SelectedPoint {
    double t = 0.0;
    int node_index = 0;
    double weight = 0.0;
};

struct GlSelection {
    std::vector<SelectedPoint> points;
    // Sum of the weights of nodes the ray never reached.
    double bg_weight = 0.0;
    std::uint64_t march_steps = 0;
    // Optical depth at the start of every march step plus the final value;
    // only filled when requested.
    std::vector<double> depth_trace;
};

struct SelectOptions {
    bool literal_pseudocode = false;
    bool record_trace = false;
};

// March [t_min, t_max] in steps of delta_t, accumulating optical depth with a
// piecewise-constant density (left endpoint of each step), and place a sample
// wherever the depth crosses the next node of `rule`.
GlSelection select_gl_points(const Ray& ray, const Field& field, const QuadratureRule& rule, double delta_t,
                             CallCounts& counts, SelectOptions options = {});

// Uniform Riemann-sum estimate with N = config.n_samples points; leftover
// transmittance goes to the background.
Rgb render_pixel_vanilla(const Ray& ray, const Field& field, const RenderConfig& config, CallCounts& counts);

// sum_k w_k c(p_k, d) + bg_weight * background.
Rgb render_pixel_gl(const Ray& ray, const Field& field, const QuadratureRule& rule, const RenderConfig& config,
                    CallCounts& counts);

// Intersects a camera ray with the field bounds and dispatches on the mode.
// Returns the background on a miss; `hit` reports whether the ray hit.
Rgb render_ray(Ray ray, const Field& field, const QuadratureRule* rule, const RenderConfig& config,
               CallCounts& counts, bool* hit = nullptr);

struct RenderStats {
    std::uint64_t color_calls = 0;
    std::uint64_t density_calls = 0;
    double wall_time = 0.0;  // seconds
    std::uint64_t rays_total = 0;
    std::uint64_t rays_missed = 0;

    double wall_ms() const { return wall_time * 1e3; }
};

struct RenderResult {
    ImageBuffer image;
    RenderStats stats;
};

// Renders every pixel of `camera`. Rows are shared among worker threads;
// the image does not depend on the worker count.
RenderResult render_image(const Field& field, const Camera& camera, const RenderConfig& config);
RenderResult render_image(const Scene& scene, const Camera& camera, const RenderConfig& config);

}  // namespace glvr
