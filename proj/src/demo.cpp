#include "glvr/demo.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include "glvr/error.hpp"

namespace glvr {

VoxelGrid make_demo_grid(std::uint32_t res) {
    const Aabb box{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
    const std::size_t count = static_cast<std::size_t>(res) * res * res;
    std::vector<float> density(count);
    std::vector<float> color(3 * count);
    const auto coord = [&](std::uint32_t i) { return -1.0 + 2.0 * i / (res - 1.0); };
    std::size_t idx = 0;
    for (std::uint32_t z = 0; z < res; ++z)
        for (std::uint32_t y = 0; y < res; ++y)
            for (std::uint32_t x = 0; x < res; ++x, ++idx) {
                const Vec3 p{coord(x), coord(y), coord(z)};
                // Torus in the xz-plane, major radius 0.55, minor 0.18.
                const double ring = std::hypot(std::hypot(p.x, p.z) - 0.55, p.y);
                const double torus = 30.0 / (1.0 + std::exp((ring - 0.18) / 0.02));
                const double core = 60.0 / (1.0 + std::exp((length(p) - 0.22) / 0.02));
                density[idx] = static_cast<float>(torus + core);
                color[3 * idx] = static_cast<float>(0.5 + 0.45 * p.x);
                color[3 * idx + 1] = static_cast<float>(0.5 + 0.45 * p.y);
                color[3 * idx + 2] = static_cast<float>(0.5 - 0.45 * p.z);
            }
    return VoxelGrid({res, res, res}, box, std::move(density), std::move(color));
}

ColorNet make_demo_net(std::uint64_t seed) {
    const std::array<std::uint32_t, 2> hidden{64, 64};
    return ColorNet::random(seed, hidden, true);
}

void write_demo_assets(const std::filesystem::path& dir, std::uint32_t res) {
    std::filesystem::create_directories(dir);
    make_demo_grid(res).save(dir / "grid.glvx");
    make_demo_net().save(dir / "net.glnn");
    std::ofstream scene(dir / "voxel_net.json");
    if (!scene) throw IoError("cannot write '" + (dir / "voxel_net.json").string() + "'");
    scene << R"({
  "field": {"kind": "voxel_net", "grid": "grid.glvx", "net": "net.glnn"},
  "cameras": [
    {"look_at": {"eye": [0.0, 1.2, 3.0], "target": [0.0, 0.0, 0.0], "up": [0.0, 1.0, 0.0]},
     "focal": 60.0, "width": 64, "height": 64}
  ],
  "render": {"mode": "gl", "n": 8},
  "background": [1.0, 1.0, 1.0]
}
)";
}

}  // namespace glvr
