#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "glvr/field.hpp"
#include "glvr/ray.hpp"

namespace glvr {

// One march step of a color profile: the integrand of the exponentially
// weighted integral, sampled against optical depth.
struct ProfileSample {
    double t = 0.0;
    double depth = 0.0;           // optical depth x(t) at the step start
    double value = 0.0;           // color channel at r(t)
    double weight_density = 0.0;  // T(t) * sigma(r(t))
};

// Marches [ray.t_min, ray.t_max] with step delta_t, one density and one color
// evaluation per step.
std::vector<ProfileSample> color_profile(const Ray& ray, const Field& field, double delta_t, int channel,
                                         CallCounts& counts);

// Keeps samples whose T * sigma exceeds relative_threshold times the maximum.
std::vector<ProfileSample> profile_support(std::span<const ProfileSample> profile,
                                           double relative_threshold = 1e-4);

std::vector<std::pair<double, double>> depth_value_pairs(std::span<const ProfileSample> profile);

struct PolyFit {
    int degree = 0;
    double lo = 0.0;  // sample range used to scale the Chebyshev basis
    double hi = 0.0;
    std::vector<double> chebyshev;     // coefficients on the scaled interval
    std::vector<double> coefficients;  // monomial coefficients in x, ascending powers
    double relative_error = 0.0;       // RMS residual / RMS of y
    double condition = 1.0;            // of the normal-equation matrix

    double operator()(double x) const;
};

// Least-squares polynomial fit through a Chebyshev basis scaled to the sample
// range. Throws DomainError on too few samples or a rank-deficient system.
PolyFit polyfit(std::span<const std::pair<double, double>> samples, int degree);

// B_n f(x) = sum_k f(k/n) C(n,k) x^k (1-x)^(n-k) for x in [0, 1].
double bernstein(const std::function<double(double)>& f, int n, double x);

}  // namespace glvr
