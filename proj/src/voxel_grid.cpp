#include <cmath>
#include <fstream>
#include <string>

#include "binary_io.hpp"
#include "glvr/error.hpp"
#include "glvr/field.hpp"

namespace glvr {

namespace {
constexpr std::uint32_t kGridVersion = 1;
}

VoxelGrid::VoxelGrid(GridResolution resolution, Aabb box, std::vector<float> densities,
                     std::vector<float> colors)
    : resolution_(resolution), box_(box), densities_(std::move(densities)), colors_(std::move(colors)) {
    for (std::uint32_t n : resolution_)
        if (n < 2) throw ConfigError("voxel grid needs at least 2 vertices per axis");
    if (!is_finite(box_.min) || !is_finite(box_.max) || !(box_.min.x < box_.max.x) ||
        !(box_.min.y < box_.max.y) || !(box_.min.z < box_.max.z))
        throw ConfigError("voxel grid box must be finite with min < max on every axis");
    const std::size_t count =
        static_cast<std::size_t>(resolution_[0]) * resolution_[1] * static_cast<std::size_t>(resolution_[2]);
    if (densities_.size() != count)
        throw ConfigError("voxel grid density array has " + std::to_string(densities_.size()) +
                          " entries, expected " + std::to_string(count));
    if (colors_.size() != 3 * count)
        throw ConfigError("voxel grid color array has " + std::to_string(colors_.size()) +
                          " entries, expected " + std::to_string(3 * count));
    for (float d : densities_)
        if (!(d >= 0.0f) || !std::isfinite(d)) throw ConfigError("voxel grid densities must be finite and >= 0");
}

TrilinearStencil trilinear_stencil(const GridResolution& res, const Aabb& box, const Vec3& p) {
    std::array<std::size_t, 3> cell{};
    std::array<double, 3> frac{};
    for (int a = 0; a < 3; ++a) {
        const double cells = res[static_cast<size_t>(a)] - 1.0;
        const double u = (p[a] - box.min[a]) / (box.max[a] - box.min[a]) * cells;
        double i = std::floor(u);
        i = std::clamp(i, 0.0, cells - 1.0);
        cell[static_cast<size_t>(a)] = static_cast<std::size_t>(i);
        frac[static_cast<size_t>(a)] = std::clamp(u - i, 0.0, 1.0);
    }
    const std::size_t nx = res[0];
    const std::size_t nxy = nx * res[1];
    TrilinearStencil s;
    for (int corner = 0; corner < 8; ++corner) {
        const std::size_t dx = corner & 1, dy = (corner >> 1) & 1, dz = (corner >> 2) & 1;
        s.index[static_cast<size_t>(corner)] = (cell[0] + dx) + nx * (cell[1] + dy) + nxy * (cell[2] + dz);
        s.weight[static_cast<size_t>(corner)] = (dx ? frac[0] : 1.0 - frac[0]) *
                                                (dy ? frac[1] : 1.0 - frac[1]) *
                                                (dz ? frac[2] : 1.0 - frac[2]);
    }
    return s;
}

double trilinear(const VoxelGrid& grid, const Vec3& p) {
    const TrilinearStencil s = trilinear_stencil(grid.resolution(), grid.bounds(), p);
    const auto d = grid.densities();
    double v = 0.0;
    for (int c = 0; c < 8; ++c) v += s.weight[static_cast<size_t>(c)] * d[s.index[static_cast<size_t>(c)]];
    return v;
}

Rgb trilinear_color(const VoxelGrid& grid, const Vec3& p) {
    const TrilinearStencil s = trilinear_stencil(grid.resolution(), grid.bounds(), p);
    const auto col = grid.colors();
    Rgb v;
    for (int c = 0; c < 8; ++c) {
        const double w = s.weight[static_cast<size_t>(c)];
        const std::size_t i = 3 * s.index[static_cast<size_t>(c)];
        v.r += w * col[i];
        v.g += w * col[i + 1];
        v.b += w * col[i + 2];
    }
    return v;
}

double VoxelGrid::density(const Vec3& p) const {
    if (!box_.contains(p)) return 0.0;
    return trilinear(*this, p);
}

Rgb VoxelGrid::color(const Vec3& p) const {
    if (!box_.contains(p)) return {};
    return clamp01(trilinear_color(*this, p));
}

VoxelGrid VoxelGrid::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open voxel grid file '" + path.string() + "'");
    const std::string name = path.string();
    detail::expect_magic(in, "GLVX", name);
    const auto version = detail::read_le<std::uint32_t>(in, name + " version");
    if (version != kGridVersion)
        throw ConfigError(name + ": unsupported voxel grid version " + std::to_string(version));
    GridResolution res{};
    for (auto& n : res) n = detail::read_le<std::uint32_t>(in, name + " resolution");
    Aabb box;
    for (int a = 0; a < 3; ++a) box.min[a] = detail::read_le<double>(in, name + " bounds");
    for (int a = 0; a < 3; ++a) box.max[a] = detail::read_le<double>(in, name + " bounds");

    const std::size_t count = static_cast<std::size_t>(res[0]) * res[1] * static_cast<std::size_t>(res[2]);
    if (count == 0 || count > (std::size_t{1} << 31))
        throw ConfigError(name + ": implausible grid resolution");
    std::vector<float> densities(count);
    for (float& d : densities) d = detail::read_le<float>(in, name + " densities");
    std::vector<float> colors(3 * count);
    for (float& c : colors) c = detail::read_le<float>(in, name + " colors");
    if (in.peek() != std::char_traits<char>::eof())
        throw ConfigError(name + ": trailing bytes after color array");
    try {
        return VoxelGrid(res, box, std::move(densities), std::move(colors));
    } catch (const ConfigError& e) {
        throw ConfigError(name + ": " + e.what());
    }
}

void VoxelGrid::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write voxel grid file '" + path.string() + "'");
    out.write("GLVX", 4);
    detail::write_le<std::uint32_t>(out, kGridVersion);
    for (std::uint32_t n : resolution_) detail::write_le<std::uint32_t>(out, n);
    for (int a = 0; a < 3; ++a) detail::write_le<double>(out, box_.min[a]);
    for (int a = 0; a < 3; ++a) detail::write_le<double>(out, box_.max[a]);
    for (float d : densities_) detail::write_le<float>(out, d);
    for (float c : colors_) detail::write_le<float>(out, c);
    if (!out) throw IoError("failed writing voxel grid file '" + path.string() + "'");
}

}  // namespace glvr
