#include <cmath>
#include <string>

#include "glvr/error.hpp"
#include "glvr/field.hpp"

namespace glvr {

double density_at(const Field& field, const Vec3& p, CallCounts& counts) {
    ++counts.density;
    const double sigma = field.density(p);
    return sigma > 0.0 ? sigma : 0.0;  // NaN and negatives become vacuum
}

Rgb color_at(const Field& field, const Vec3& p, const Vec3& dir, CallCounts& counts) {
    ++counts.color;
    return clamp01(field.color(p, dir));
}

Primitive Primitive::sphere(Vec3 center, double radius, double sigma, Rgb color, ColorMode mode) {
    Primitive p;
    p.shape = Shape::sphere;
    p.center = center;
    p.radius = radius;
    p.sigma = sigma;
    p.color = color;
    p.color_mode = mode;
    return p;
}

Primitive Primitive::box(Vec3 min, Vec3 max, double sigma, Rgb color, ColorMode mode) {
    Primitive p;
    p.shape = Shape::box;
    p.box_min = min;
    p.box_max = max;
    p.center = (min + max) * 0.5;
    p.sigma = sigma;
    p.color = color;
    p.color_mode = mode;
    return p;
}

Primitive Primitive::blob(Vec3 center, double scale, double peak, Rgb color, ColorMode mode) {
    Primitive p;
    p.shape = Shape::blob;
    p.center = center;
    p.scale = scale;
    p.sigma = peak;
    p.color = color;
    p.color_mode = mode;
    return p;
}

double Primitive::density(const Vec3& p) const {
    switch (shape) {
        case Shape::sphere: {
            const Vec3 d = p - center;
            return dot(d, d) <= radius * radius ? sigma : 0.0;
        }
        case Shape::box:
            return Aabb{box_min, box_max}.contains(p) ? sigma : 0.0;
        case Shape::blob: {
            const Vec3 d = p - center;
            return sigma * std::exp(-dot(d, d) / (scale * scale));
        }
    }
    return 0.0;
}

namespace {

// Outward direction used to shade view-tinted primitives.
Vec3 normal_proxy(const Primitive& prim, const Vec3& p) {
    if (prim.shape != Shape::box) {
        const Vec3 d = p - prim.center;
        const double len = length(d);
        return len > 0.0 ? d / len : Vec3{0.0, 0.0, 1.0};
    }
    // Box: the face whose plane is nearest in half-extent units.
    const Vec3 half = (prim.box_max - prim.box_min) * 0.5;
    const Vec3 rel = p - prim.center;
    int axis = 0;
    double best = -1.0;
    for (int a = 0; a < 3; ++a) {
        const double u = half[a] > 0.0 ? std::abs(rel[a]) / half[a] : 0.0;
        if (u > best) {
            best = u;
            axis = a;
        }
    }
    Vec3 n;
    n[axis] = rel[axis] >= 0.0 ? 1.0 : -1.0;
    return n;
}

}  // namespace

Rgb Primitive::color_toward(const Vec3& p, const Vec3& dir) const {
    if (color_mode == ColorMode::constant) return color;
    const double shade = std::max(0.0, -dot(dir, normal_proxy(*this, p)));
    return color * shade;
}

Aabb Primitive::bounds() const {
    switch (shape) {
        case Shape::sphere: {
            const Vec3 r{radius, radius, radius};
            return {center - r, center + r};
        }
        case Shape::box:
            return {box_min, box_max};
        case Shape::blob: {
            const double e = kBlobSupportScales * scale;
            return {center - Vec3{e, e, e}, center + Vec3{e, e, e}};
        }
    }
    return {};
}

void Primitive::validate() const {
    const auto finite_rgb = [](const Rgb& c) {
        return std::isfinite(c.r) && std::isfinite(c.g) && std::isfinite(c.b);
    };
    if (!std::isfinite(sigma)) throw ConfigError("primitive sigma must be finite");
    if (sigma < 0.0) throw ConfigError("primitive sigma must be >= 0, got " + std::to_string(sigma));
    if (!finite_rgb(color)) throw ConfigError("primitive color must be finite");
    switch (shape) {
        case Shape::sphere:
            if (!is_finite(center) || !std::isfinite(radius))
                throw ConfigError("sphere parameters must be finite");
            if (!(radius > 0.0)) throw ConfigError("sphere radius must be > 0");
            break;
        case Shape::box:
            if (!is_finite(box_min) || !is_finite(box_max)) throw ConfigError("box corners must be finite");
            if (!Aabb{box_min, box_max}.valid()) throw ConfigError("box min must be <= max");
            break;
        case Shape::blob:
            if (!is_finite(center) || !std::isfinite(scale)) throw ConfigError("blob parameters must be finite");
            if (!(scale > 0.0)) throw ConfigError("blob scale must be > 0");
            break;
    }
}

AnalyticScene::AnalyticScene(std::vector<Primitive> primitives, std::optional<Aabb> bounds)
    : primitives_(std::move(primitives)) {
    for (const Primitive& p : primitives_) p.validate();
    if (bounds) {
        if (!bounds->valid() || !is_finite(bounds->min) || !is_finite(bounds->max))
            throw ConfigError("scene bounds must be finite with min <= max");
        bounds_ = *bounds;
    } else if (primitives_.empty()) {
        bounds_ = {{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
    } else {
        bounds_ = primitives_.front().bounds();
        for (const Primitive& p : primitives_) bounds_ = merge(bounds_, p.bounds());
    }
}

double AnalyticScene::density(const Vec3& p) const {
    double sigma = 0.0;
    for (const Primitive& prim : primitives_) sigma += prim.density(p);
    return sigma;
}

Rgb AnalyticScene::color(const Vec3& p, const Vec3& dir) const {
    double total = 0.0;
    Rgb mix;
    for (const Primitive& prim : primitives_) {
        const double s = prim.density(p);
        if (s <= 0.0) continue;
        total += s;
        mix += prim.color_toward(p, dir) * s;
    }
    if (total <= 0.0) return {};
    return mix * (1.0 / total);
}

namespace {

std::optional<Interval> sphere_interval(const Ray& ray, const Primitive& s) {
    const Vec3 oc = ray.origin - s.center;
    const double b = dot(oc, ray.dir);
    const double c = dot(oc, oc) - s.radius * s.radius;
    const double disc = b * b - c;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    return Interval{-b - root, -b + root};
}

double overlap(const Interval& seg, double a, double b) {
    return std::max(0.0, std::min(seg.hi, b) - std::max(seg.lo, a));
}

double simpson(const Primitive& blob, const Ray& ray, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double sum = blob.density(ray.at(a)) + blob.density(ray.at(b));
    for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * blob.density(ray.at(a + i * h));
    return sum * h / 3.0;
}

double blob_depth(const Primitive& blob, const Ray& ray, double a, double b) {
    int intervals = 4096;
    double coarse = simpson(blob, ray, a, b, intervals);
    while (intervals < (1 << 20)) {
        intervals *= 2;
        const double fine = simpson(blob, ray, a, b, intervals);
        const bool done = std::abs(fine - coarse) <= 1e-13 * std::max(1.0, std::abs(fine));
        coarse = fine;
        if (done) break;
    }
    return coarse;
}

}  // namespace

Transmittance transmittance_oracle(const AnalyticScene& scene, const Ray& ray, double t) {
    Transmittance out;
    const double a = ray.t_min;
    const double b = std::max(t, a);
    if (b <= a) return out;
    for (const Primitive& prim : scene.primitives()) {
        if (prim.sigma == 0.0) continue;
        switch (prim.shape) {
            case Shape::sphere:
                if (auto seg = sphere_interval(ray, prim)) out.optical_depth += prim.sigma * overlap(*seg, a, b);
                break;
            case Shape::box:
                if (auto seg = slab_interval(ray.origin, ray.dir, Aabb{prim.box_min, prim.box_max}))
                    out.optical_depth += prim.sigma * overlap(*seg, a, b);
                break;
            case Shape::blob:
                out.optical_depth += blob_depth(prim, ray, a, b);
                out.approximate = true;
                break;
        }
    }
    out.value = std::exp(-out.optical_depth);
    return out;
}

}  // namespace glvr
