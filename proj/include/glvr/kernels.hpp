#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops. Each kernel has a scalar reference and, where the
// target allows it, an AVX2 (x86-64) or NEON (aarch64) variant. The variant is
// picked once per process from the CPU features; GLVR_ISA=scalar forces the
// reference path.
namespace glvr::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

struct KernelTable {
    Isa isa;
    // out[r] = bias[r] + sum_c weights[r * cols + c] * in[c], cols = in.size().
    void (*dense_forward)(std::span<const float> weights, std::span<const float> bias,
                          std::span<const float> in, std::span<float> out);
    float (*dot)(std::span<const float> a, std::span<const float> b);
    double (*sum_squared_diff)(std::span<const double> a, std::span<const double> b);
};

// Table for a given ISA, or nullptr when it is not compiled in or the CPU lacks it.
const KernelTable* table_for(Isa isa);

// The table selected for this process.
const KernelTable& active();
inline Isa active_isa() { return active().isa; }

inline void dense_forward(std::span<const float> weights, std::span<const float> bias,
                          std::span<const float> in, std::span<float> out) {
    active().dense_forward(weights, bias, in, out);
}
inline float dot(std::span<const float> a, std::span<const float> b) { return active().dot(a, b); }
inline double sum_squared_diff(std::span<const double> a, std::span<const double> b) {
    return active().sum_squared_diff(a, b);
}

}  // namespace glvr::kernels
