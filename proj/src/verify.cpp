#include "glvr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "glvr/error.hpp"

namespace glvr {

std::vector<ProfileSample> color_profile(const Ray& ray, const Field& field, double delta_t, int channel,
                                         CallCounts& counts) {
    if (channel < 0 || channel > 2) throw UsageError("channel must be 0, 1 or 2");
    if (!(delta_t > 0.0)) throw UsageError("profile step must be > 0");
    std::vector<ProfileSample> out;
    double depth = 0.0;
    const std::int64_t steps = march_step_count(ray.span(), delta_t);
    for (std::int64_t k = 0; k < steps; ++k) {
        const double t = ray.t_min + static_cast<double>(k) * delta_t;
        const double h = k + 1 < steps ? delta_t : ray.t_max - t;
        const Vec3 p = ray.at(t);
        const double sigma = density_at(field, p, counts);
        const Rgb c = color_at(field, p, ray.dir, counts);
        out.push_back({t, depth, c[channel], std::exp(-depth) * sigma});
        depth += sigma * h;
    }
    return out;
}

std::vector<ProfileSample> profile_support(std::span<const ProfileSample> profile, double relative_threshold) {
    double peak = 0.0;
    for (const auto& s : profile) peak = std::max(peak, s.weight_density);
    std::vector<ProfileSample> out;
    if (peak <= 0.0) return out;
    for (const auto& s : profile)
        if (s.weight_density > relative_threshold * peak) out.push_back(s);
    return out;
}

std::vector<std::pair<double, double>> depth_value_pairs(std::span<const ProfileSample> profile) {
    std::vector<std::pair<double, double>> out;
    out.reserve(profile.size());
    for (const auto& s : profile) out.emplace_back(s.depth, s.value);
    return out;
}

namespace {

double to_unit(double x, double lo, double hi) { return hi > lo ? (2.0 * x - lo - hi) / (hi - lo) : 0.0; }

// Chebyshev series on [-1, 1] -> power series in u.
std::vector<double> chebyshev_to_power(const std::vector<double>& cheb) {
    const std::size_t n = cheb.size();
    std::vector<std::vector<double>> t(n, std::vector<double>(n, 0.0));
    t[0][0] = 1.0;
    if (n > 1) t[1][1] = 1.0;
    for (std::size_t k = 2; k < n; ++k)  // T_k = 2u T_{k-1} - T_{k-2}
        for (std::size_t i = 0; i < n; ++i) {
            if (i + 1 < n) t[k][i + 1] += 2.0 * t[k - 1][i];
            t[k][i] -= t[k - 2][i];
        }
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) out[i] += cheb[k] * t[k][i];
    return out;
}

// Substitute u = a x + b into a power series in u.
std::vector<double> compose_linear(const std::vector<double>& pu, double a, double b) {
    std::vector<double> out(pu.size(), 0.0);
    for (std::size_t k = pu.size(); k-- > 0;) {
        // out = out * (a x + b) + pu[k]
        std::vector<double> next(pu.size(), 0.0);
        for (std::size_t i = 0; i < out.size(); ++i) {
            next[i] += b * out[i];
            if (i + 1 < out.size()) next[i + 1] += a * out[i];
        }
        next[0] += pu[k];
        out = std::move(next);
    }
    return out;
}

}  // namespace

double PolyFit::operator()(double x) const {
    const double u = to_unit(x, lo, hi);
    // Clenshaw recurrence.
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = chebyshev.size(); k-- > 1;) {
        const double b0 = 2.0 * u * b1 - b2 + chebyshev[k];
        b2 = b1;
        b1 = b0;
    }
    return u * b1 - b2 + chebyshev[0];
}

PolyFit polyfit(std::span<const std::pair<double, double>> samples, int degree) {
    if (degree < 0) throw UsageError("polynomial degree must be >= 0");
    const std::size_t terms = static_cast<std::size_t>(degree) + 1;
    if (samples.size() < terms)
        throw DomainError("fit of degree " + std::to_string(degree) + " needs at least " + std::to_string(terms) +
                          " samples, got " + std::to_string(samples.size()));
    PolyFit fit;
    fit.degree = degree;
    fit.lo = samples.front().first;
    fit.hi = samples.front().first;
    for (const auto& [x, y] : samples) {
        fit.lo = std::min(fit.lo, x);
        fit.hi = std::max(fit.hi, x);
    }

    const Eigen::Index rows = static_cast<Eigen::Index>(samples.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(terms);
    Eigen::MatrixXd basis(rows, cols);
    Eigen::VectorXd y(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double u = to_unit(samples[static_cast<size_t>(r)].first, fit.lo, fit.hi);
        y(r) = samples[static_cast<size_t>(r)].second;
        basis(r, 0) = 1.0;
        if (cols > 1) basis(r, 1) = u;
        for (Eigen::Index k = 2; k < cols; ++k) basis(r, k) = 2.0 * u * basis(r, k - 1) - basis(r, k - 2);
    }
    const Eigen::MatrixXd normal = basis.transpose() * basis;
    const Eigen::VectorXd rhs = basis.transpose() * y;

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal, Eigen::EigenvaluesOnly);
    const double emax = eig.eigenvalues().maxCoeff();
    const double emin = eig.eigenvalues().minCoeff();
    fit.condition = emin > 0.0 ? emax / emin : std::numeric_limits<double>::infinity();
    if (!(emin > 1e-13 * emax))
        throw DomainError("rank-deficient fit of degree " + std::to_string(degree) +
                          " (normal-equation condition number " +
                          (std::isfinite(fit.condition) ? std::to_string(fit.condition) : std::string("inf")) +
                          ", sample range [" + std::to_string(fit.lo) + ", " + std::to_string(fit.hi) + "])");

    const Eigen::VectorXd coef = normal.ldlt().solve(rhs);
    fit.chebyshev.assign(coef.data(), coef.data() + coef.size());

    const Eigen::VectorXd resid = basis * coef - y;
    const double rms_resid = std::sqrt(resid.squaredNorm() / static_cast<double>(rows));
    const double rms_y = std::sqrt(y.squaredNorm() / static_cast<double>(rows));
    fit.relative_error = rms_y > 0.0 ? rms_resid / rms_y : (rms_resid > 0.0 ? 1.0 : 0.0);

    if (fit.hi > fit.lo) {
        const double a = 2.0 / (fit.hi - fit.lo);
        const double b = -(fit.hi + fit.lo) / (fit.hi - fit.lo);
        fit.coefficients = compose_linear(chebyshev_to_power(fit.chebyshev), a, b);
    } else {
        fit.coefficients = {fit.chebyshev[0]};
    }
    return fit;
}

double bernstein(const std::function<double(double)>& f, int n, double x) {
    if (n < 0) throw UsageError("Bernstein order must be >= 0");
    if (!(x >= 0.0 && x <= 1.0)) throw UsageError("Bernstein argument must lie in [0, 1]");
    if (n == 0 || x == 0.0) return f(0.0);
    if (x == 1.0) return f(1.0);
    const double lx = std::log(x), l1x = std::log1p(-x);
    const double lgn = std::lgamma(n + 1.0);
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double log_basis = lgn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * lx + (n - k) * l1x;
        sum += f(static_cast<double>(k) / n) * std::exp(log_basis);
    }
    return sum;
}

}  // namespace glvr
