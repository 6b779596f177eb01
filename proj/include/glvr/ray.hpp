#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>

#include "glvr/vec.hpp"

namespace glvr {

// r(t) = origin + t * dir with a unit direction. [t_min, t_max] is the
// parametric span inside the scene bounds once ray_aabb has been applied.
struct Ray {
    Vec3 origin;
    Vec3 dir;
    double t_min = 0.0;
    double t_max = 0.0;

    Vec3 at(double t) const { return origin + dir * t; }
    double span() const { return t_max - t_min; }
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Steps of length delta_t needed to cover span. A trailing remainder below a
// relative 1e-12 of the span is rounding noise and gets no step of its own.
inline std::int64_t march_step_count(double span, double delta_t) {
    if (!(span > 0.0)) return 0;
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(span / delta_t * (1.0 - 1e-12))));
}

// Unclamped slab test: the parameter range where origin + t * dir lies in the
// box, or nullopt when the line misses it.
inline std::optional<Interval> slab_interval(const Vec3& origin, const Vec3& dir, const Aabb& box) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
        if (dir[a] == 0.0) {
            if (origin[a] < box.min[a] || origin[a] > box.max[a]) return std::nullopt;
            continue;
        }
        const double inv = 1.0 / dir[a];
        double t0 = (box.min[a] - origin[a]) * inv;
        double t1 = (box.max[a] - origin[a]) * inv;
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        if (lo > hi) return std::nullopt;
    }
    return Interval{lo, hi};
}

}  // namespace glvr
