#pragma once

#include <optional>
#include <string_view>

#include "glvr/vec.hpp"

namespace glvr {

enum class RenderMode { vanilla, gl };

std::string_view to_string(RenderMode mode);
// Throws UsageError for anything but "vanilla" / "gl".
RenderMode parse_render_mode(std::string_view text);

struct RenderConfig {
    RenderMode mode = RenderMode::gl;
    // Vanilla: number of uniform samples N. GL: quadrature node count n.
    int n_samples = 8;
    // March step in world units. When unset each ray uses span / march_divisions.
    std::optional<double> delta_t;
    int march_divisions = 1024;
    Rgb background;
    // GL only: reproduce the published pseudocode verbatim (one node per
    // step, sample placed one step behind). Off by default.
    bool literal_pseudocode = false;
    // Worker threads for render_image; 0 picks hardware concurrency.
    int threads = 0;

    // Throws UsageError naming the offending field.
    void validate() const;
    double step_for(double span) const { return delta_t ? *delta_t : span / march_divisions; }
};

}  // namespace glvr
