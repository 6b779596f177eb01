#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "glvr/error.hpp"
#include "glvr/scene.hpp"

namespace glvr {

using nlohmann::json;

Camera::Camera(const std::array<double, 12>& pose, double focal, double cx, double cy, int width, int height)
    : pose_(pose), focal_(focal), cx_(cx), cy_(cy), width_(width), height_(height) {
    for (double v : pose_)
        if (!std::isfinite(v)) throw ConfigError("camera pose must be finite");
    if (!(focal_ > 0.0) || !std::isfinite(focal_)) throw ConfigError("camera focal length must be > 0");
    if (!std::isfinite(cx_) || !std::isfinite(cy_)) throw ConfigError("camera principal point must be finite");
    if (width_ < 1 || height_ < 1) throw ConfigError("camera resolution must be at least 1x1");
    const Vec3 cols[3] = {{pose_[0], pose_[4], pose_[8]}, {pose_[1], pose_[5], pose_[9]}, {pose_[2], pose_[6], pose_[10]}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double expect = i == j ? 1.0 : 0.0;
            if (std::abs(dot(cols[i], cols[j]) - expect) > 1e-6)
                throw ConfigError("camera rotation columns must be orthonormal within 1e-6");
        }
}

Camera Camera::look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double focal, int width, int height) {
    const Vec3 fwd = target - eye;
    if (!(length(fwd) > 0.0)) throw ConfigError("look_at target must differ from eye");
    const Vec3 z = normalized(-fwd);
    const Vec3 xr = cross(up, z);
    if (!(length(xr) > 1e-12)) throw ConfigError("look_at up vector is parallel to the view direction");
    const Vec3 x = normalized(xr);
    const Vec3 y = cross(z, x);
    const std::array<double, 12> pose{x.x, y.x, z.x, eye.x, x.y, y.y, z.y, eye.y, x.z, y.z, z.z, eye.z};
    return Camera(pose, focal, 0.5 * width, 0.5 * height, width, height);
}

Vec3 Camera::rotate(const Vec3& v) const {
    return {pose_[0] * v.x + pose_[1] * v.y + pose_[2] * v.z, pose_[4] * v.x + pose_[5] * v.y + pose_[6] * v.z,
            pose_[8] * v.x + pose_[9] * v.y + pose_[10] * v.z};
}

Ray generate_ray(const Camera& camera, int px, int py) {
    if (px < 0 || px >= camera.width() || py < 0 || py >= camera.height())
        throw UsageError("pixel (" + std::to_string(px) + ", " + std::to_string(py) + ") outside " +
                         std::to_string(camera.width()) + "x" + std::to_string(camera.height()) + " image");
    const Vec3 local{(px + 0.5 - camera.cx()) / camera.focal(), -(py + 0.5 - camera.cy()) / camera.focal(), -1.0};
    Ray ray;
    ray.origin = camera.position();
    ray.dir = normalized(camera.rotate(local));
    return ray;
}

std::optional<Interval> ray_aabb(const Ray& ray, const Aabb& box) {
    auto hit = slab_interval(ray.origin, ray.dir, box);
    if (!hit || hit->hi < 0.0) return std::nullopt;
    hit->lo = std::max(hit->lo, 0.0);
    return hit;
}

const Camera& Scene::camera(int index) const {
    if (index < 0 || static_cast<std::size_t>(index) >= cameras.size())
        throw UsageError("camera index " + std::to_string(index) + " out of range (scene has " +
                         std::to_string(cameras.size()) + ")");
    return cameras[static_cast<std::size_t>(index)];
}

namespace {

// Typed accessors that report the JSON key path on failure.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const json& raw() const { return j_; }
    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

    Node at(const char* key) const {
        if (!j_.is_object()) fail("expected an object");
        if (!j_.contains(key)) throw ConfigError(child(key) + ": missing required field");
        return Node(j_.at(key), child(key));
    }
    Node at(std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

    double number() const {
        if (!j_.is_number()) fail("expected a number");
        const double v = j_.get<double>();
        if (!std::isfinite(v)) fail("expected a finite number");
        return v;
    }
    int integer() const {
        if (!j_.is_number_integer()) fail("expected an integer");
        return j_.get<int>();
    }
    bool boolean() const {
        if (!j_.is_boolean()) fail("expected true or false");
        return j_.get<bool>();
    }
    std::string string() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }
    std::size_t array_size(std::size_t expected = 0) const {
        if (!j_.is_array()) fail("expected an array");
        if (expected && j_.size() != expected) fail("expected " + std::to_string(expected) + " elements");
        return j_.size();
    }
    Vec3 vec3() const {
        array_size(3);
        return {at(std::size_t{0}).number(), at(std::size_t{1}).number(), at(std::size_t{2}).number()};
    }
    Rgb rgb() const {
        const Vec3 v = vec3();
        const Rgb c{v.x, v.y, v.z};
        for (int i = 0; i < 3; ++i)
            if (c[i] < 0.0 || c[i] > 1.0) fail("color channels must lie in [0, 1]");
        return c;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(path_ + ": " + msg); }

private:
    std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& j_;
    std::string path_;
};

template <class F>
auto with_context(const Node& node, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        if (msg.rfind(node.path(), 0) == 0) throw;
        throw ConfigError(node.path() + ": " + msg);
    }
}

Primitive parse_primitive(const Node& n) {
    const std::string shape = n.at("shape").string();
    const Rgb color = n.has("color") ? n.at("color").rgb() : Rgb{1.0, 1.0, 1.0};
    ColorMode mode = ColorMode::constant;
    if (n.has("color_mode")) {
        const std::string m = n.at("color_mode").string();
        if (m == "view_tinted")
            mode = ColorMode::view_tinted;
        else if (m != "constant")
            n.at("color_mode").fail("unknown color mode '" + m + "' (constant | view_tinted)");
    }
    Primitive p;
    if (shape == "sphere") {
        p = Primitive::sphere(n.at("center").vec3(), n.at("radius").number(), n.at("sigma").number(), color, mode);
    } else if (shape == "box") {
        p = Primitive::box(n.at("min").vec3(), n.at("max").vec3(), n.at("sigma").number(), color, mode);
    } else if (shape == "blob") {
        p = Primitive::blob(n.at("center").vec3(), n.at("scale").number(), n.at("peak").number(), color, mode);
    } else {
        n.at("shape").fail("unknown shape '" + shape + "' (sphere | box | blob)");
    }
    with_context(n, [&] {
        p.validate();
        return 0;
    });
    return p;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
    std::filesystem::path p(file);
    return p.is_absolute() ? p : base / p;
}

void parse_field(const Node& n, const std::filesystem::path& base, Scene& scene) {
    const std::string kind = n.at("kind").string();
    if (kind == "analytic") {
        std::vector<Primitive> prims;
        const Node list = n.at("primitives");
        for (std::size_t i = 0; i < list.array_size(); ++i) prims.push_back(parse_primitive(list.at(i)));
        std::optional<Aabb> bounds;
        if (n.has("bounds")) {
            const Node b = n.at("bounds");
            bounds = Aabb{b.at("min").vec3(), b.at("max").vec3()};
        }
        auto analytic = with_context(n, [&] { return std::make_shared<const AnalyticScene>(std::move(prims), bounds); });
        scene.analytic = analytic;
        scene.field = analytic;
        return;
    }
    if (kind == "voxel" || kind == "voxel_net") {
        const Node grid_node = n.at("grid");
        const auto grid_path = resolve(base, grid_node.string());
        auto grid = with_context(grid_node, [&] { return std::make_shared<const VoxelGrid>(VoxelGrid::load(grid_path)); });
        if (kind == "voxel") {
            scene.field = std::make_shared<const VoxelField>(std::move(grid));
            return;
        }
        const Node net_node = n.at("net");
        const auto net_path = resolve(base, net_node.string());
        auto net = with_context(net_node, [&] { return std::make_shared<const ColorNet>(ColorNet::load(net_path)); });
        scene.field = std::make_shared<const GridNetField>(std::move(grid), std::move(net));
        return;
    }
    n.at("kind").fail("unknown field kind '" + kind + "' (analytic | voxel | voxel_net)");
}

Camera parse_camera(const Node& n) {
    const int width = n.at("width").integer();
    const int height = n.at("height").integer();
    const double focal = n.at("focal").number();
    return with_context(n, [&] {
        if (n.has("look_at")) {
            const Node la = n.at("look_at");
            const Vec3 up = la.has("up") ? la.at("up").vec3() : Vec3{0.0, 1.0, 0.0};
            return Camera::look_at(la.at("eye").vec3(), la.at("target").vec3(), up, focal, width, height);
        }
        const Node pose_node = n.at("pose");
        pose_node.array_size(12);
        std::array<double, 12> pose{};
        for (std::size_t i = 0; i < 12; ++i) pose[i] = pose_node.at(i).number();
        const double cx = n.has("cx") ? n.at("cx").number() : 0.5 * width;
        const double cy = n.has("cy") ? n.at("cy").number() : 0.5 * height;
        return Camera(pose, focal, cx, cy, width, height);
    });
}

void parse_render(const Node& n, RenderConfig& cfg) {
    if (n.has("mode")) {
        const std::string m = n.at("mode").string();
        if (m == "vanilla")
            cfg.mode = RenderMode::vanilla;
        else if (m == "gl")
            cfg.mode = RenderMode::gl;
        else
            n.at("mode").fail("unknown render mode '" + m + "' (vanilla | gl)");
    }
    if (n.has("n")) cfg.n_samples = n.at("n").integer();
    if (n.has("dt")) cfg.delta_t = n.at("dt").number();
    if (n.has("march_divisions")) cfg.march_divisions = n.at("march_divisions").integer();
    if (n.has("threads")) cfg.threads = n.at("threads").integer();
    if (n.has("literal_pseudocode")) cfg.literal_pseudocode = n.at("literal_pseudocode").boolean();
    try {
        cfg.validate();
    } catch (const UsageError& e) {
        throw ConfigError(n.path() + ": " + e.what());
    }
}

std::string line_context(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Scene parse_scene(std::string_view json_text, const std::filesystem::path& base_dir, std::string name) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("JSON parse error at " + line_context(json_text, e.byte > 0 ? e.byte - 1 : 0) +
                          ": " + e.what());
    }
    try {
        const Node root(doc, "");
        if (!doc.is_object()) root.fail("scene root must be a JSON object");
        Scene scene;
        scene.name = std::move(name);
        parse_field(root.at("field"), base_dir, scene);

        const Node cams = root.at("cameras");
        for (std::size_t i = 0; i < cams.array_size(); ++i) scene.cameras.push_back(parse_camera(cams.at(i)));
        if (scene.cameras.empty()) cams.fail("at least one camera is required");

        if (root.has("render")) parse_render(root.at("render"), scene.defaults);
        if (root.has("background")) scene.defaults.background = root.at("background").rgb();
        return scene;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid scene: ") + e.what());
    }
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scene file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    const std::string name = path.stem().string();
    try {
        return parse_scene(text.str(), path.parent_path(), name);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace glvr
