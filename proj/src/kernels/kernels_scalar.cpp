#include "glvr/kernels.hpp"

namespace glvr::kernels {
namespace {

float dot_scalar(std::span<const float> a, std::span<const float> b) {
    float sum = 0.0f;
    for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

void dense_forward_scalar(std::span<const float> weights, std::span<const float> bias,
                          std::span<const float> in, std::span<float> out) {
    const size_t cols = in.size();
    for (size_t r = 0; r < out.size(); ++r)
        out[r] = bias[r] + dot_scalar(weights.subspan(r * cols, cols), in);
}

double sum_squared_diff_scalar(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

}  // namespace

extern const KernelTable kScalarTable;
const KernelTable kScalarTable{Isa::scalar, dense_forward_scalar, dot_scalar, sum_squared_diff_scalar};

}  // namespace glvr::kernels
