#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "glvr/ray.hpp"
#include "glvr/vec.hpp"

namespace glvr {

struct FieldSample {
    double sigma = 0.0;
    Rgb color;
};

// Evaluation counters. Render workers keep their own and merge after join.
struct CallCounts {
    std::uint64_t density = 0;
    std::uint64_t color = 0;

    CallCounts& operator+=(const CallCounts& o) {
        density += o.density;
        color += o.color;
        return *this;
    }
};

// A scene field: volume density sigma(p) >= 0 and view-dependent color
// c(p, d). Implementations are immutable and safe to share across threads.
class Field {
public:
    virtual ~Field() = default;

    virtual double density(const Vec3& p) const = 0;
    virtual Rgb color(const Vec3& p, const Vec3& dir) const = 0;
    // Region outside of which the density is treated as zero.
    virtual Aabb bounds() const = 0;
};

// Counted and clamped accessors used by every renderer.
double density_at(const Field& field, const Vec3& p, CallCounts& counts);
Rgb color_at(const Field& field, const Vec3& p, const Vec3& dir, CallCounts& counts);

// ---------------------------------------------------------------------------
// Analytic scenes

enum class Shape { sphere, box, blob };
enum class ColorMode { constant, view_tinted };

struct Primitive {
    Shape shape = Shape::sphere;
    Vec3 center;        // sphere, blob
    double radius = 1;  // sphere
    Vec3 box_min;       // box
    Vec3 box_max;       // box
    double scale = 1;   // blob
    double sigma = 0;   // constant density, or blob peak density
    Rgb color;
    ColorMode color_mode = ColorMode::constant;

    static Primitive sphere(Vec3 center, double radius, double sigma, Rgb color,
                            ColorMode mode = ColorMode::constant);
    static Primitive box(Vec3 min, Vec3 max, double sigma, Rgb color,
                         ColorMode mode = ColorMode::constant);
    // sigma(p) = peak * exp(-|p - center|^2 / scale^2)
    static Primitive blob(Vec3 center, double scale, double peak, Rgb color,
                          ColorMode mode = ColorMode::constant);

    double density(const Vec3& p) const;
    Rgb color_toward(const Vec3& p, const Vec3& dir) const;
    Aabb bounds() const;
    // Throws ConfigError on non-finite parameters, non-positive sizes or negative density.
    void validate() const;
};

// Blobs are truncated at this many scale lengths for bounding purposes.
inline constexpr double kBlobSupportScales = 4.0;

class AnalyticScene final : public Field {
public:
    explicit AnalyticScene(std::vector<Primitive> primitives, std::optional<Aabb> bounds = std::nullopt);

    double density(const Vec3& p) const override;
    // Density-weighted mix of the colors of the primitives covering p.
    Rgb color(const Vec3& p, const Vec3& dir) const override;
    Aabb bounds() const override { return bounds_; }

    std::span<const Primitive> primitives() const { return primitives_; }

private:
    std::vector<Primitive> primitives_;
    Aabb bounds_;
};

struct Transmittance {
    double value = 1.0;
    double optical_depth = 0.0;
    bool approximate = false;  // true when a blob forced numeric integration
};

// T(t) = exp(-integral of sigma over [ray.t_min, t]). Spheres and boxes use
// exact chord lengths; blobs use refined composite Simpson integration.
Transmittance transmittance_oracle(const AnalyticScene& scene, const Ray& ray, double t);

// ---------------------------------------------------------------------------
// Voxel grids

using GridResolution = std::array<std::uint32_t, 3>;

// Values live on the vertices of a regular lattice spanning the AABB;
// index = x + Nx * (y + Ny * z).
class VoxelGrid {
public:
    VoxelGrid(GridResolution resolution, Aabb box, std::vector<float> densities,
              std::vector<float> colors);

    const GridResolution& resolution() const { return resolution_; }
    const Aabb& bounds() const { return box_; }
    std::span<const float> densities() const { return densities_; }
    std::span<const float> colors() const { return colors_; }
    std::size_t vertex_count() const { return densities_.size(); }
    std::size_t index(std::uint32_t x, std::uint32_t y, std::uint32_t z) const {
        return x + static_cast<std::size_t>(resolution_[0]) * (y + static_cast<std::size_t>(resolution_[1]) * z);
    }

    // Vacuum (0 / black) outside the box.
    double density(const Vec3& p) const;
    Rgb color(const Vec3& p) const;

    // "GLVX" little-endian file, see README.
    static VoxelGrid load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

private:
    GridResolution resolution_;
    Aabb box_;
    std::vector<float> densities_;
    std::vector<float> colors_;
};

// The eight lattice corners enclosing p and their trilinear weights.
struct TrilinearStencil {
    std::array<std::size_t, 8> index{};
    std::array<double, 8> weight{};
};
TrilinearStencil trilinear_stencil(const GridResolution& res, const Aabb& box, const Vec3& p);

// Interpolated density; p must lie inside the grid box.
double trilinear(const VoxelGrid& grid, const Vec3& p);
Rgb trilinear_color(const VoxelGrid& grid, const Vec3& p);

class VoxelField final : public Field {
public:
    explicit VoxelField(std::shared_ptr<const VoxelGrid> grid) : grid_(std::move(grid)) {}

    double density(const Vec3& p) const override { return grid_->density(p); }
    Rgb color(const Vec3& p, const Vec3&) const override { return grid_->color(p); }
    Aabb bounds() const override { return grid_->bounds(); }
    const VoxelGrid& grid() const { return *grid_; }

private:
    std::shared_ptr<const VoxelGrid> grid_;
};

// ---------------------------------------------------------------------------
// Color network

struct DenseLayer {
    std::uint32_t rows = 0;  // outputs
    std::uint32_t cols = 0;  // inputs
    std::vector<float> weights;  // row-major rows x cols
    std::vector<float> bias;     // rows
};

// Feed-forward color head: ReLU hidden layers, sigmoid output, input
// (position, direction). When the first layer takes 54 inputs both vectors are
// expanded with 4 sinusoidal frequency bands.
class ColorNet {
public:
    static constexpr int kRawInputs = 6;
    static constexpr int kEncodingBands = 4;
    static constexpr int kEncodedInputs = 2 * 3 * (1 + 2 * kEncodingBands);

    explicit ColorNet(std::vector<DenseLayer> layers);

    std::span<const DenseLayer> layers() const { return layers_; }
    bool positional_encoding() const { return layers_.front().cols == kEncodedInputs; }
    Rgb forward(const Vec3& p, const Vec3& dir) const;

    // "GLNN" little-endian file, see README.
    static ColorNet load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    // Deterministic He-style initialisation from a 64-bit seed.
    static ColorNet random(std::uint64_t seed, std::span<const std::uint32_t> hidden, bool encoding);

private:
    std::vector<DenseLayer> layers_;
    std::uint32_t widest_ = 0;
};

inline Rgb net_forward(const ColorNet& net, const Vec3& p, const Vec3& dir) { return net.forward(p, dir); }

// Density from a voxel grid, color from a ColorNet.
class GridNetField final : public Field {
public:
    GridNetField(std::shared_ptr<const VoxelGrid> grid, std::shared_ptr<const ColorNet> net)
        : grid_(std::move(grid)), net_(std::move(net)) {}

    double density(const Vec3& p) const override { return grid_->density(p); }
    Rgb color(const Vec3& p, const Vec3& dir) const override { return net_->forward(p, dir); }
    Aabb bounds() const override { return grid_->bounds(); }

    const VoxelGrid& grid() const { return *grid_; }
    const ColorNet& net() const { return *net_; }

private:
    std::shared_ptr<const VoxelGrid> grid_;
    std::shared_ptr<const ColorNet> net_;
};

}  // namespace glvr
