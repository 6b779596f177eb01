#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "glvr/error.hpp"
#include "glvr/render.hpp"
#include "glvr/scene.hpp"

using namespace glvr;
namespace fs = std::filesystem;

namespace {

constexpr std::array<double, 12> kIdentity = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0};

std::string error_of(std::string_view json) {
    try {
        parse_scene(json, fs::temp_directory_path());
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

constexpr std::string_view kMinimal = R"({
  "field": {"kind": "analytic",
            "primitives": [{"shape": "sphere", "center": [0, 0, 0], "radius": 0.5, "sigma": 10,
                            "color": [0.9, 0.6, 0.3]}]},
  "cameras": [{"pose": [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 3], "focal": 16, "width": 16, "height": 16}],
  "background": [0, 0, 0]
})";

}  // namespace

TEST(GenerateRay, PrincipalPointLooksDownMinusZ) {
    const Camera cam(kIdentity, 100.0, 32.0, 24.0, 64, 48);
    // Pixel (31.5, 23.5) has its center at the principal point.
    const Camera centered(kIdentity, 100.0, 32.5, 24.5, 64, 48);
    const Ray r = generate_ray(centered, 32, 24);
    EXPECT_NEAR(r.dir.x, 0.0, 1e-15);
    EXPECT_NEAR(r.dir.y, 0.0, 1e-15);
    EXPECT_NEAR(r.dir.z, -1.0, 1e-15);
    EXPECT_EQ(r.origin, (Vec3{0, 0, 0}));
    EXPECT_NO_THROW(generate_ray(cam, 63, 47));
}

TEST(GenerateRay, OneFocalLengthRight) {
    const double f = 20.0;
    const Camera cam(kIdentity, f, 10.5, 10.5, 64, 21);
    const Ray r = generate_ray(cam, 10 + static_cast<int>(f), 10);
    EXPECT_NEAR(r.dir.x, 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(r.dir.y, 0.0, 1e-15);
    EXPECT_NEAR(r.dir.z, -1 / std::sqrt(2.0), 1e-15);
}

TEST(GenerateRay, TranslationMovesOriginOnly) {
    std::array<double, 12> pose = kIdentity;
    pose[3] = 1.5;
    pose[7] = -2.0;
    pose[11] = 7.0;
    const Camera a(kIdentity, 30, 8, 8, 16, 16), b(pose, 30, 8, 8, 16, 16);
    const Ray ra = generate_ray(a, 3, 12), rb = generate_ray(b, 3, 12);
    EXPECT_EQ(ra.dir, rb.dir);
    EXPECT_EQ(rb.origin, (Vec3{1.5, -2.0, 7.0}));
}

TEST(GenerateRay, OutOfRangePixel) {
    const Camera cam(kIdentity, 10, 4, 4, 8, 8);
    EXPECT_THROW(generate_ray(cam, 8, 0), UsageError);
    EXPECT_THROW(generate_ray(cam, 0, -1), UsageError);
}

TEST(GenerateRay, AllDirectionsUnitAndForward) {
    const Camera cam = Camera::look_at({1, 2, 3}, {0, 0, 0}, {0, 1, 0}, 20, 40, 30);
    for (int y = 0; y < cam.height(); ++y)
        for (int x = 0; x < cam.width(); ++x) {
            const Ray r = generate_ray(cam, x, y);
            EXPECT_NEAR(length(r.dir), 1.0, 1e-12);
            EXPECT_GT(dot(r.dir, cam.forward()), 0.0);
        }
}

TEST(Camera, RejectsNonOrthonormalPose) {
    std::array<double, 12> pose = kIdentity;
    pose[0] = 1.1;
    EXPECT_THROW(Camera(pose, 10, 4, 4, 8, 8), ConfigError);
    EXPECT_THROW(Camera(kIdentity, 0, 4, 4, 8, 8), ConfigError);
}

TEST(Camera, LookAtFacesTarget) {
    const Camera cam = Camera::look_at({0, 0, 5}, {0, 0, 0}, {0, 1, 0}, 10, 8, 8);
    EXPECT_NEAR(cam.forward().z, -1.0, 1e-15);
    EXPECT_EQ(cam.position(), (Vec3{0, 0, 5}));
}

TEST(RayAabb, Examples) {
    const Aabb box{{-1, -1, -1}, {1, 1, 1}};
    const auto hit = ray_aabb(Ray{{0, 0, 5}, {0, 0, -1}}, box);
    ASSERT_TRUE(hit);
    EXPECT_DOUBLE_EQ(hit->lo, 4.0);
    EXPECT_DOUBLE_EQ(hit->hi, 6.0);

    EXPECT_FALSE(ray_aabb(Ray{{0, 2, 5}, {0, 0, -1}}, box));

    const auto inside = ray_aabb(Ray{{0.5, 0, 0}, {1, 0, 0}}, box);
    ASSERT_TRUE(inside);
    EXPECT_EQ(inside->lo, 0.0);
    EXPECT_DOUBLE_EQ(inside->hi, 0.5);

    EXPECT_FALSE(ray_aabb(Ray{{0, 0, 5}, {0, 0, 1}}, box));  // box is behind
}

TEST(RayAabb, MidpointInsideProperty) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-5, 5);
    std::normal_distribution<double> g;
    int hits = 0;
    for (int i = 0; i < 10000; ++i) {
        const Vec3 a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
        const Aabb box{min(a, b), max(a, b)};
        const Ray ray{{u(rng), u(rng), u(rng)}, normalized(Vec3{g(rng), g(rng), g(rng)})};
        if (const auto hit = ray_aabb(ray, box)) {
            ++hits;
            EXPECT_LE(hit->lo, hit->hi);
            EXPECT_GE(hit->lo, 0.0);
            EXPECT_TRUE(box.contains(ray.at(0.5 * (hit->lo + hit->hi)), 1e-9));
        }
    }
    EXPECT_GT(hits, 1000);
}

TEST(LoadScene, MinimalSceneRendersSomething) {
    const Scene s = parse_scene(kMinimal, fs::temp_directory_path(), "minimal");
    ASSERT_TRUE(s.analytic);
    ASSERT_EQ(s.cameras.size(), 1u);
    RenderConfig cfg = s.defaults;
    const RenderResult r = render_image(s, s.camera(0), cfg);
    double brightest = 0;
    for (double v : r.image.data()) brightest = std::max(brightest, v);
    EXPECT_GT(brightest, 0.5);
}

TEST(LoadScene, ShippedScenesLoad) {
    for (const char* name : {"slab", "blobs", "spheres", "surfaces", "empty"}) {
        const Scene s = load_scene(fs::path(GLVR_SOURCE_DIR) / "scenes" / (std::string(name) + ".json"));
        EXPECT_EQ(s.name, name);
        EXPECT_FALSE(s.cameras.empty());
    }
}

TEST(LoadScene, MissingVoxelFileNamesPath) {
    const std::string msg = error_of(R"({
      "field": {"kind": "voxel", "grid": "nowhere/missing_grid.glvx"},
      "cameras": [{"pose": [1,0,0,0, 0,1,0,0, 0,0,1,3], "focal": 8, "width": 4, "height": 4}]
    })");
    EXPECT_NE(msg.find("missing_grid.glvx"), std::string::npos) << msg;
}

TEST(LoadScene, NegativeSigmaRejected) {
    const std::string msg = error_of(R"({
      "field": {"kind": "analytic",
                "primitives": [{"shape": "sphere", "center": [0,0,0], "radius": 1, "sigma": -2, "color": [1,1,1]}]},
      "cameras": [{"pose": [1,0,0,0, 0,1,0,0, 0,0,1,3], "focal": 8, "width": 4, "height": 4}]
    })");
    EXPECT_NE(msg.find("sigma"), std::string::npos) << msg;
}

TEST(LoadScene, ParseErrorReportsLine) {
    const std::string msg = error_of("{\n  \"field\": {\n    \"kind\": \"analytic\",,\n  }\n}");
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(LoadScene, UnknownKindAndKeyPaths) {
    EXPECT_NE(error_of(R"({"field": {"kind": "octree"}, "cameras": []})").find("octree"), std::string::npos);
    const std::string msg = error_of(R"({
      "field": {"kind": "analytic", "primitives": [{"shape": "sphere", "center": [0,0], "radius": 1, "sigma": 1,
                                                    "color": [1,1,1]}]},
      "cameras": [{"pose": [1,0,0,0, 0,1,0,0, 0,0,1,3], "focal": 8, "width": 4, "height": 4}]
    })");
    EXPECT_NE(msg.find("center"), std::string::npos) << msg;
}

TEST(LoadScene, MissingFile) {
    EXPECT_THROW(load_scene(fs::temp_directory_path() / "no_such_scene.json"), ConfigError);
}

TEST(LoadScene, MismatchedGridHeader) {
    const fs::path dir = fs::temp_directory_path() / "glvr_test_scene";
    fs::create_directories(dir);
    std::ofstream(dir / "broken.glvx", std::ios::binary) << std::string("GLVX\x02\0\0\0", 8);
    const std::string json = R"({
      "field": {"kind": "voxel", "grid": "broken.glvx"},
      "cameras": [{"pose": [1,0,0,0, 0,1,0,0, 0,0,1,3], "focal": 8, "width": 4, "height": 4}]
    })";
    EXPECT_THROW(parse_scene(json, dir), ConfigError);
    std::ofstream(dir / "broken.glvx", std::ios::binary) << std::string("GLVX\x01\0\0\0\x02\0", 10);
    EXPECT_THROW(parse_scene(json, dir), ConfigError);
}
