#include <cmath>
#include <filesystem>
#include <fstream>
#include <atomic>
#include <functional>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "glvr/error.hpp"
#include "glvr/field.hpp"

using namespace glvr;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "glvr_test_field";
    fs::create_directories(dir);
    return dir / name;
}

VoxelGrid grid_from(const std::function<double(const Vec3&)>& f, GridResolution res, Aabb box) {
    std::vector<float> d, c;
    for (std::uint32_t z = 0; z < res[2]; ++z)
        for (std::uint32_t y = 0; y < res[1]; ++y)
            for (std::uint32_t x = 0; x < res[0]; ++x) {
                const Vec3 p{box.min.x + (box.max.x - box.min.x) * x / (res[0] - 1),
                             box.min.y + (box.max.y - box.min.y) * y / (res[1] - 1),
                             box.min.z + (box.max.z - box.min.z) * z / (res[2] - 1)};
                d.push_back(static_cast<float>(f(p)));
                c.insert(c.end(), {0.1f * x, 0.2f * y, 0.05f * z});
            }
    return VoxelGrid(res, box, std::move(d), std::move(c));
}

DenseLayer zero_layer(std::uint32_t rows, std::uint32_t cols) {
    return DenseLayer{rows, cols, std::vector<float>(rows * cols, 0.0f), std::vector<float>(rows, 0.0f)};
}

}  // namespace

TEST(Analytic, DensityExamples) {
    const AnalyticScene box({Primitive::box({-1, -1, -1}, {1, 1, 1}, 2.0, {0.8, 0.2, 0.1})});
    CallCounts counts;
    EXPECT_EQ(density_at(box, {0.2, 0.3, -0.4}, counts), 2.0);
    EXPECT_EQ(density_at(box, {3, 0, 0}, counts), 0.0);
    EXPECT_EQ(counts.density, 2u);
    EXPECT_EQ(counts.color, 0u);

    const double s = 0.3;
    const AnalyticScene blob({Primitive::blob({1, 2, 3}, s, 4.0, {1, 1, 1})});
    EXPECT_NEAR(density_at(blob, {1, 2, 3 + s}, counts), 4.0 * std::exp(-1.0), 1e-14);
    EXPECT_NEAR(4.0 * std::exp(-1.0), 1.4715, 1e-4);
}

TEST(Analytic, ColorExamples) {
    const AnalyticScene box({Primitive::box({-1, -1, -1}, {1, 1, 1}, 2.0, {0.8, 0.2, 0.1})});
    CallCounts counts;
    const Rgb c = color_at(box, {0, 0, 0}, {0, 0, -1}, counts);
    EXPECT_EQ(c, (Rgb{0.8, 0.2, 0.1}));
    EXPECT_EQ(counts.color, 1u);
    EXPECT_EQ(counts.density, 0u);
}

TEST(Analytic, ViewTintedFacesTheViewer) {
    const AnalyticScene s({Primitive::sphere({0, 0, 0}, 1.0, 5.0, {1, 0.5, 0.25}, ColorMode::view_tinted)});
    CallCounts counts;
    // Looking at the +z hemisphere from above: full brightness.
    const Rgb front = color_at(s, {0, 0, 0.9}, {0, 0, -1}, counts);
    EXPECT_NEAR(front.r, 1.0, 1e-12);
    const Rgb back = color_at(s, {0, 0, -0.9}, {0, 0, -1}, counts);
    EXPECT_EQ(back, Rgb{});
}

TEST(Analytic, DensityFuzzNeverNegativeOrNan) {
    const AnalyticScene s({Primitive::sphere({0, 0, 0}, 0.5, 3.0, {1, 0, 0}),
                           Primitive::box({-1, 0, -1}, {1, 1, 1}, 0.0, {0, 1, 0}),
                           Primitive::blob({0.3, 0.3, 0.3}, 0.2, 50.0, {0, 0, 1})});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::uniform_real_distribution<double> near(-2, 2);
    CallCounts counts;
    for (int i = 0; i < 100000; ++i) {
        const Vec3 p = i % 2 ? Vec3{u(rng), u(rng), u(rng)} : Vec3{near(rng), near(rng), near(rng)};
        const double d = density_at(s, p, counts);
        ASSERT_TRUE(d >= 0.0 && std::isfinite(d)) << p.x << ' ' << p.y << ' ' << p.z;
    }
}

TEST(Analytic, ValidationRejectsBadPrimitives) {
    EXPECT_THROW(AnalyticScene({Primitive::sphere({0, 0, 0}, 1, -1, {})}), ConfigError);
    EXPECT_THROW(AnalyticScene({Primitive::sphere({0, 0, 0}, 0, 1, {})}), ConfigError);
    EXPECT_THROW(AnalyticScene({Primitive::blob({0, 0, 0}, -1, 1, {})}), ConfigError);
    EXPECT_THROW(AnalyticScene({Primitive::box({1, 0, 0}, {0, 1, 1}, 1, {})}), ConfigError);
    EXPECT_THROW(AnalyticScene({Primitive::sphere({NAN, 0, 0}, 1, 1, {})}), ConfigError);
}

TEST(Transmittance, ZeroDensity) {
    const AnalyticScene s({Primitive::box({-1, -1, -1}, {1, 1, 1}, 0.0, {})});
    const Ray ray{{0, 0, 5}, {0, 0, -1}, 0.0, 10.0};
    for (double t : {0.0, 4.5, 6.0, 10.0}) EXPECT_EQ(transmittance_oracle(s, ray, t).value, 1.0);
}

TEST(Transmittance, SlabClosedForm) {
    const double L = 2.0;
    const double sigma = std::log(2.0) / L;
    const AnalyticScene s({Primitive::box({-1, -1, -1}, {1, 1, 1}, sigma, {})});
    const Ray ray{{0, 0, 5}, {0, 0, -1}, 0.0, 10.0};
    const Transmittance past = transmittance_oracle(s, ray, 8.0);
    EXPECT_NEAR(past.value, 0.5, 1e-15);
    EXPECT_FALSE(past.approximate);
    EXPECT_NEAR(transmittance_oracle(s, ray, 5.0).value, std::exp(-sigma), 1e-15);

    const AnalyticScene dense({Primitive::box({-1, -1, -1}, {1, 1, 1}, 3.0, {})});
    EXPECT_NEAR(transmittance_oracle(dense, ray, 9.0).value, std::exp(-6.0), 1e-15);
}

TEST(Transmittance, SphereChord) {
    const AnalyticScene s({Primitive::sphere({0, 0, 0}, 1.0, 1.5, {})});
    const double b = 0.6;  // impact parameter
    const Ray ray{{b, 0, -5}, {0, 0, 1}, 0.0, 10.0};
    EXPECT_NEAR(transmittance_oracle(s, ray, 10.0).optical_depth, 1.5 * 2 * std::sqrt(1 - b * b), 1e-13);
}

TEST(Transmittance, BlobMatchesErfClosedForm) {
    const double peak = 3.0, s = 0.4, b = 0.1;
    const AnalyticScene scene({Primitive::blob({0, b, 0}, s, peak, {})});
    const Ray ray{{0, 0, -3}, {0, 0, 1}, 0.0, 6.0};
    const auto closed = [&](double t) {
        // integral of peak exp(-(b^2 + (u - 3)^2) / s^2) du over [0, t]
        const double k = peak * std::exp(-b * b / (s * s)) * s * std::sqrt(M_PI) / 2;
        return k * (std::erf((t - 3) / s) - std::erf(-3 / s));
    };
    for (double t : {2.5, 3.0, 3.3, 6.0}) {
        const Transmittance tr = transmittance_oracle(scene, ray, t);
        EXPECT_TRUE(tr.approximate);
        EXPECT_NEAR(tr.optical_depth, closed(t), 1e-10) << t;
    }
}

TEST(Trilinear, Examples) {
    const GridResolution res{2, 2, 2};
    const Aabb box{{0, 0, 0}, {1, 1, 1}};
    const VoxelGrid uniform(res, box, std::vector<float>(8, 3.5f), std::vector<float>(24, 0.25f));
    EXPECT_DOUBLE_EQ(trilinear(uniform, {0.5, 0.5, 0.5}), 3.5);

    // z = 0 layer is 0, z = 1 layer is 8
    const VoxelGrid split(res, box, {0, 0, 0, 0, 8, 8, 8, 8}, std::vector<float>(24, 0.0f));
    EXPECT_DOUBLE_EQ(trilinear(split, {0.5, 0.5, 0.5}), 4.0);
    EXPECT_DOUBLE_EQ(trilinear(split, {0, 0, 1}), 8.0);
    EXPECT_DOUBLE_EQ(trilinear(split, {1, 1, 0}), 0.0);
}

TEST(Trilinear, VertexColorIsStoredColor) {
    const Aabb box{{-1, -1, -1}, {1, 1, 1}};
    const VoxelGrid g = grid_from([](const Vec3&) { return 1.0; }, {3, 4, 5}, box);
    const Vec3 p{0.0, -1.0 + 2.0 * 2 / 3, 1.0};  // vertex (1, 2, 4)
    const Rgb c = g.color(p);
    EXPECT_NEAR(c.r, 0.1f, 1e-7);
    EXPECT_NEAR(c.g, 0.4f, 1e-7);
    EXPECT_NEAR(c.b, 0.2f, 1e-7);
}

TEST(Trilinear, ReproducesTrilinearPolynomials) {
    const auto f = [](const Vec3& p) {
        return 2.0 + 0.5 * p.x - 0.25 * p.y + 0.75 * p.z + 0.125 * p.x * p.y - 0.5 * p.y * p.z + 0.25 * p.x * p.z +
               0.375 * p.x * p.y * p.z;
    };
    // Lattice spacing of 0.5 keeps every vertex value exact in float.
    const Aabb box{{-1, -1, -1}, {1, 1, 1}};
    const VoxelGrid g = grid_from(f, {5, 5, 5}, box);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 100; ++i) {
        const Vec3 p{u(rng), u(rng), u(rng)};
        EXPECT_NEAR(trilinear(g, p), f(p), 1e-12);
    }
}

TEST(Trilinear, StencilIsConvex) {
    const GridResolution res{4, 3, 6};
    const Aabb box{{0, 0, 0}, {3, 2, 5}};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 p{3 * u(rng), 2 * u(rng), 5 * u(rng)};
        const TrilinearStencil s = trilinear_stencil(res, box, p);
        double sum = 0;
        for (double w : s.weight) {
            EXPECT_GE(w, 0.0);
            sum += w;
        }
        EXPECT_NEAR(sum, 1.0, 1e-14);
    }
}

TEST(Voxel, OutsideIsVacuum) {
    const VoxelGrid g = grid_from([](const Vec3&) { return 5.0; }, {2, 2, 2}, {{0, 0, 0}, {1, 1, 1}});
    EXPECT_EQ(g.density({1.5, 0.5, 0.5}), 0.0);
    EXPECT_EQ(g.color({-0.1, 0.5, 0.5}), Rgb{});
    EXPECT_EQ(g.density({0.5, 0.5, 0.5}), 5.0);
}

TEST(Voxel, ConstructorValidation) {
    const Aabb box{{0, 0, 0}, {1, 1, 1}};
    EXPECT_THROW(VoxelGrid({2, 2, 2}, box, std::vector<float>(7), std::vector<float>(24)), ConfigError);
    EXPECT_THROW(VoxelGrid({2, 2, 2}, box, std::vector<float>(8), std::vector<float>(23)), ConfigError);
    EXPECT_THROW(VoxelGrid({1, 2, 2}, box, std::vector<float>(4), std::vector<float>(12)), ConfigError);
    std::vector<float> neg(8, 1.0f);
    neg[3] = -1.0f;
    EXPECT_THROW(VoxelGrid({2, 2, 2}, box, neg, std::vector<float>(24)), ConfigError);
}

TEST(Voxel, FileRoundTrip) {
    const VoxelGrid g = grid_from([](const Vec3& p) { return p.x * p.x + p.z; }, {3, 4, 5}, {{-1, 0, 2}, {1, 3, 4}});
    const fs::path path = temp_path("grid.glvx");
    g.save(path);
    EXPECT_EQ(fs::file_size(path), 4 + 4 + 12 + 48 + 60 * 4 + 180 * 4u);
    const VoxelGrid back = VoxelGrid::load(path);
    EXPECT_EQ(back.resolution(), g.resolution());
    EXPECT_EQ(back.bounds().min, g.bounds().min);
    EXPECT_EQ(back.bounds().max, g.bounds().max);
    EXPECT_TRUE(std::equal(back.densities().begin(), back.densities().end(), g.densities().begin()));
    EXPECT_TRUE(std::equal(back.colors().begin(), back.colors().end(), g.colors().begin()));

    std::ifstream in(path, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    EXPECT_EQ(std::string(magic, 4), "GLVX");
}

TEST(Voxel, LoadErrors) {
    EXPECT_THROW(VoxelGrid::load(temp_path("does_not_exist.glvx")), ConfigError);
    const fs::path bad = temp_path("bad_magic.glvx");
    std::ofstream(bad, std::ios::binary) << "GLNN\x01\0\0\0";
    EXPECT_THROW(VoxelGrid::load(bad), ConfigError);

    const VoxelGrid g = grid_from([](const Vec3&) { return 1.0; }, {2, 2, 2}, {{0, 0, 0}, {1, 1, 1}});
    const fs::path cut = temp_path("truncated.glvx");
    g.save(cut);
    fs::resize_file(cut, fs::file_size(cut) - 5);
    EXPECT_THROW(VoxelGrid::load(cut), Error);
}

TEST(ColorNet, ZeroWeightsGiveHalfGray) {
    const ColorNet net({zero_layer(8, 6), zero_layer(3, 8)});
    const Rgb c = net.forward({0.3, -2, 1}, {0, 0, -1});
    EXPECT_EQ(c, (Rgb{0.5, 0.5, 0.5}));
    const GridNetField field(std::make_shared<VoxelGrid>(grid_from([](const Vec3&) { return 1.0; }, {2, 2, 2},
                                                                   {{0, 0, 0}, {1, 1, 1}})),
                             std::make_shared<ColorNet>(net));
    CallCounts counts;
    EXPECT_EQ(color_at(field, {0.5, 0.5, 0.5}, {1, 0, 0}, counts), (Rgb{0.5, 0.5, 0.5}));
    EXPECT_EQ(counts.color, 1u);
}

TEST(ColorNet, SaturatingBias) {
    DenseLayer l = zero_layer(3, 6);
    for (std::uint32_t r = 0; r < 3; ++r) {
        l.weights[r * 6 + r] = 1.0f;
        l.bias[r] = 40.0f;
    }
    const ColorNet net({l});
    const Rgb c = net.forward({0.1, 0.2, 0.3}, {0, 1, 0});
    EXPECT_NEAR(c.r, 1.0, 1e-12);
    EXPECT_NEAR(c.g, 1.0, 1e-12);
    EXPECT_NEAR(c.b, 1.0, 1e-12);
}

TEST(ColorNet, GoldenFromSeed) {
    const std::vector<std::uint32_t> hidden = {32, 16};
    const Vec3 p{0.25, -0.5, 0.125};
    const Vec3 d = normalized(Vec3{1, 2, -2});
    const Rgb plain = ColorNet::random(2024, hidden, false).forward(p, d);
    EXPECT_NEAR(plain.r, 0.39512074, 1e-6);
    EXPECT_NEAR(plain.g, 0.526053131, 1e-6);
    EXPECT_NEAR(plain.b, 0.437663883, 1e-6);
    const Rgb enc = ColorNet::random(2024, hidden, true).forward(p, d);
    EXPECT_NEAR(enc.r, 0.504796982, 1e-6);
    EXPECT_NEAR(enc.g, 0.331958115, 1e-6);
    EXPECT_NEAR(enc.b, 0.447563827, 1e-6);
}

TEST(ColorNet, RejectsBrokenChains) {
    EXPECT_THROW(ColorNet({zero_layer(8, 6), zero_layer(3, 7)}), ConfigError);
    EXPECT_THROW(ColorNet({zero_layer(8, 6), zero_layer(4, 8)}), ConfigError);
    EXPECT_THROW(ColorNet({zero_layer(3, 5)}), ConfigError);
    EXPECT_THROW(ColorNet(std::vector<DenseLayer>{}), ConfigError);
}

TEST(ColorNet, FileRoundTrip) {
    const std::vector<std::uint32_t> hidden = {16};
    const ColorNet net = ColorNet::random(11, hidden, true);
    EXPECT_TRUE(net.positional_encoding());
    const fs::path path = temp_path("net.glnn");
    net.save(path);
    const ColorNet back = ColorNet::load(path);
    ASSERT_EQ(back.layers().size(), net.layers().size());
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
        EXPECT_EQ(back.layers()[i].weights, net.layers()[i].weights);
        EXPECT_EQ(back.layers()[i].bias, net.layers()[i].bias);
    }
    const Vec3 p{0.1, 0.2, 0.3}, d{0, 0, 1};
    EXPECT_EQ(back.forward(p, d), net.forward(p, d));

    const fs::path bad = temp_path("bad.glnn");
    std::ofstream(bad, std::ios::binary) << "GLVX";
    EXPECT_THROW(ColorNet::load(bad), ConfigError);
}

TEST(ColorNet, ForwardIsThreadSafe) {
    const std::vector<std::uint32_t> hidden = {64, 64};
    const ColorNet net = ColorNet::random(3, hidden, true);
    const Rgb want = net.forward({0.2, 0.1, -0.3}, {0, 0, 1});
    std::vector<std::thread> threads;
    std::atomic<int> mismatches{0};
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&] {
            for (int i = 0; i < 500; ++i)
                if (!(net.forward({0.2, 0.1, -0.3}, {0, 0, 1}) == want)) ++mismatches;
        });
    for (auto& t : threads) t.join();
    EXPECT_EQ(mismatches.load(), 0);
}
