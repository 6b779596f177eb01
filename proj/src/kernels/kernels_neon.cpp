#include <arm_neon.h>

#include "glvr/kernels.hpp"

namespace glvr::kernels {
namespace {

float dot_neon(std::span<const float> a, std::span<const float> b) {
    const size_t n = a.size();
    const float* pa = a.data();
    const float* pb = b.data();
    float32x4_t acc0 = vdupq_n_f32(0.0f);
    float32x4_t acc1 = vdupq_n_f32(0.0f);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = vfmaq_f32(acc0, vld1q_f32(pa + i), vld1q_f32(pb + i));
        acc1 = vfmaq_f32(acc1, vld1q_f32(pa + i + 4), vld1q_f32(pb + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = vfmaq_f32(acc0, vld1q_f32(pa + i), vld1q_f32(pb + i));
    float sum = vaddvq_f32(vaddq_f32(acc0, acc1));
    for (; i < n; ++i) sum += pa[i] * pb[i];
    return sum;
}

void dense_forward_neon(std::span<const float> weights, std::span<const float> bias,
                        std::span<const float> in, std::span<float> out) {
    const size_t cols = in.size();
    for (size_t r = 0; r < out.size(); ++r)
        out[r] = bias[r] + dot_neon(weights.subspan(r * cols, cols), in);
}

double sum_squared_diff_neon(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    const double* pa = a.data();
    const double* pb = b.data();
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(pa + i), vld1q_f64(pb + i));
        const float64x2_t d1 = vsubq_f64(vld1q_f64(pa + i + 2), vld1q_f64(pb + i + 2));
        acc0 = vfmaq_f64(acc0, d0, d0);
        acc1 = vfmaq_f64(acc1, d1, d1);
    }
    double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) {
        const double d = pa[i] - pb[i];
        sum += d * d;
    }
    return sum;
}

}  // namespace

extern const KernelTable kNeonTable;
const KernelTable kNeonTable{Isa::neon, dense_forward_neon, dot_neon, sum_squared_diff_neon};

}  // namespace glvr::kernels
