#pragma once

#include <cstdint>
#include <filesystem>

#include "glvr/field.hpp"

namespace glvr {

// A smooth voxel test object: a soft-edged torus and a denser sphere core
// colored by position, sampled on a res^3 lattice over [-1, 1]^3.
VoxelGrid make_demo_grid(std::uint32_t res);

// The color head used with the demo grid (two hidden layers of 64, encoded input).
ColorNet make_demo_net(std::uint64_t seed = 7);

// Writes grid.glvx, net.glnn and voxel_net.json into `dir`.
void write_demo_assets(const std::filesystem::path& dir, std::uint32_t res = 48);

}  // namespace glvr
