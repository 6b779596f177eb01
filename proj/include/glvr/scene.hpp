#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glvr/field.hpp"
#include "glvr/ray.hpp"
#include "glvr/render_config.hpp"

namespace glvr {

// Pinhole camera. pose is the row-major 3x4 camera-to-world matrix
// [R | t]; the camera looks down its local -z axis with +y up.
class Camera {
public:
    Camera(const std::array<double, 12>& pose, double focal, double cx, double cy, int width, int height);

    static Camera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double focal, int width,
                          int height);

    const std::array<double, 12>& pose() const { return pose_; }
    double focal() const { return focal_; }
    double cx() const { return cx_; }
    double cy() const { return cy_; }
    int width() const { return width_; }
    int height() const { return height_; }
    Vec3 position() const { return {pose_[3], pose_[7], pose_[11]}; }
    // World-space optical axis (the rotated -z).
    Vec3 forward() const { return {-pose_[2], -pose_[6], -pose_[10]}; }
    Vec3 rotate(const Vec3& v) const;

private:
    std::array<double, 12> pose_;
    double focal_;
    double cx_;
    double cy_;
    int width_;
    int height_;
};

// Ray through the center of pixel (px, py); t bounds are left at zero.
// Throws UsageError when the pixel is outside the image.
Ray generate_ray(const Camera& camera, int px, int py);

// Slab intersection with t_min clamped to >= 0; nullopt on a miss.
std::optional<Interval> ray_aabb(const Ray& ray, const Aabb& box);

struct Scene {
    std::string name;
    std::shared_ptr<const Field> field;
    // Set when the field is analytic, for closed-form oracles.
    std::shared_ptr<const AnalyticScene> analytic;
    std::vector<Camera> cameras;
    RenderConfig defaults;

    const Camera& camera(int index) const;
};

// Loads a JSON scene description. Relative file references resolve against
// the scene file's directory. Throws ConfigError with line or key context.
Scene load_scene(const std::filesystem::path& path);
Scene parse_scene(std::string_view json_text, const std::filesystem::path& base_dir, std::string name = "scene");

}  // namespace glvr
