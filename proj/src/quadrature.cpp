#include "glvr/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>

#include "glvr/error.hpp"

namespace glvr {

std::string_view to_string(RuleKind kind) {
    return kind == RuleKind::laguerre ? "laguerre" : "legendre";
}

PolyValue laguerre_eval(int n, double x) {
    double prev = 0.0;
    double cur = 1.0, cur_d = 0.0;
    for (int k = 0; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        const double next_d = cur_d - cur;
        prev = cur;
        cur = next;
        cur_d = next_d;
    }
    return {cur, cur_d};
}

PolyValue legendre_eval(int n, double x) {
    double prev = 0.0, prev_d = 0.0;
    double cur = 1.0, cur_d = 0.0;
    for (int k = 0; k < n; ++k) {
        const double next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        const double next_d = prev_d + (2.0 * k + 1.0) * cur;
        prev = cur;
        prev_d = cur_d;
        cur = next;
        cur_d = next_d;
    }
    return {cur, cur_d};
}

QuadratureRule::QuadratureRule(RuleKind kind, std::vector<double> nodes, std::vector<double> weights)
    : kind_(kind), nodes_(std::move(nodes)), weights_(std::move(weights)) {
    if (nodes_.empty() || nodes_.size() != weights_.size())
        throw NumericalError("quadrature rule needs matching, non-empty node and weight lists");
}

double QuadratureRule::weight_sum() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
}

double laguerre_weight_from_derivative(int n, double x) {
    const double d = laguerre_eval(n, x).derivative;
    return 1.0 / (x * d * d);
}

double laguerre_weight_from_next(int n, double x) {
    const double l = laguerre_eval(n + 1, x).value;
    const double np1 = n + 1.0;
    return x / (np1 * np1 * l * l);
}

namespace {

constexpr int kMaxNewtonIterations = 200;
constexpr int kCachedRules = kMaxRuleSize;

// Safeguarded Newton on a sign-changing bracket [lo, hi]. Steps that leave the
// bracket fall back to bisection.
template <class Eval>
double polish_root(Eval eval, double lo, double hi, double guess) {
    const double f_lo = eval(lo).value;
    const double f_hi = eval(hi).value;
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw NumericalError("root bracket has no sign change");

    double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
        const PolyValue v = eval(x);
        if (v.value == 0.0) return x;
        if ((v.value > 0.0) == (f_lo > 0.0))
            lo = x;
        else
            hi = x;
        if (hi - lo <= 4.0 * eps * std::max(std::abs(lo), std::abs(hi))) return 0.5 * (lo + hi);

        double next = v.derivative != 0.0 ? x - v.value / v.derivative : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 2.0 * eps * std::abs(x)) return next;
        x = next;
    }
    throw NumericalError("Newton iteration did not converge within " +
                         std::to_string(kMaxNewtonIterations) + " iterations");
}

// Roots of L_n in increasing order. The zeros of L_{m-1} strictly interlace
// those of L_m, so building degrees 1..n in turn gives one-root brackets.
std::vector<double> laguerre_roots(int n) {
    auto eval_for = [](int m) { return [m](double x) { return laguerre_eval(m, x); }; };
    std::vector<double> prev{1.0};  // L_1 = 1 - x
    for (int m = 2; m <= n; ++m) {
        const auto eval = eval_for(m);
        // Largest zero of L_m lies below 4m + 2; widen if the sign test disagrees.
        double upper = 4.0 * m + 2.0;
        const double sign_at_last = eval(prev.back()).value;
        while ((eval(upper).value > 0.0) == (sign_at_last > 0.0)) upper *= 2.0;

        std::vector<double> roots;
        roots.reserve(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            const double lo = i == 0 ? 0.0 : prev[static_cast<size_t>(i - 1)];
            const double hi = i == m - 1 ? upper : prev[static_cast<size_t>(i)];
            double guess;
            if (i == 0)
                guess = 3.0 / (2.0 * m + 1.0);
            else if (i == 1)
                guess = roots[0] + 15.0 / (1.0 + 2.5 * m);
            else
                guess = roots.back() + 1.2 * (roots.back() - roots[roots.size() - 2]);
            roots.push_back(polish_root(eval, lo, hi, guess));
        }
        prev = std::move(roots);
    }
    return prev;
}

std::vector<double> legendre_roots(int n) {
    std::vector<double> prev{0.0};  // P_1 = x
    for (int m = 2; m <= n; ++m) {
        const auto eval = [m](double x) { return legendre_eval(m, x); };
        std::vector<double> roots;
        roots.reserve(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            const double lo = i == 0 ? -1.0 : prev[static_cast<size_t>(i - 1)];
            const double hi = i == m - 1 ? 1.0 : prev[static_cast<size_t>(i)];
            // Tricomi-style estimate, ascending order.
            const double guess = -std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
            roots.push_back(polish_root(eval, lo, hi, guess));
        }
        prev = std::move(roots);
    }
    return prev;
}

QuadratureRule build_laguerre(int n) {
    std::vector<double> nodes = laguerre_roots(n);
    std::vector<double> weights;
    weights.reserve(nodes.size());
    for (double x : nodes) weights.push_back(laguerre_weight_from_derivative(n, x));
    return QuadratureRule(RuleKind::laguerre, std::move(nodes), std::move(weights));
}

QuadratureRule build_legendre(int n) {
    std::vector<double> nodes = legendre_roots(n);
    for (double& x : nodes)
        if (x == 0.0) x = 0.0;  // drop a negative zero
    std::vector<double> weights;
    weights.reserve(nodes.size());
    for (double x : nodes) {
        const double d = legendre_eval(n, x).derivative;
        weights.push_back(2.0 / ((1.0 - x * x) * d * d));
    }
    return QuadratureRule(RuleKind::legendre, std::move(nodes), std::move(weights));
}

void check_size(int n) {
    if (n < 1 || n > kMaxRuleSize)
        throw UsageError("quadrature size n must be in [1, " + std::to_string(kMaxRuleSize) +
                         "], got " + std::to_string(n));
}

template <QuadratureRule (*Build)(int)>
const QuadratureRule& cached(int n) {
    static std::array<std::optional<QuadratureRule>, kCachedRules + 1> cache;
    static std::array<std::once_flag, kCachedRules + 1> flags;
    const auto idx = static_cast<size_t>(n);
    std::call_once(flags[idx], [&] { cache[idx].emplace(Build(n)); });
    return *cache[idx];
}

}  // namespace

QuadratureRule laguerre_rule(int n) {
    check_size(n);
    if (n <= kCachedRules) return cached<build_laguerre>(n);
    return build_laguerre(n);
}

QuadratureRule legendre_rule(int n) {
    check_size(n);
    if (n <= kCachedRules) return cached<build_legendre>(n);
    return build_legendre(n);
}

QuadratureRule make_rule(RuleKind kind, int n) {
    return kind == RuleKind::laguerre ? laguerre_rule(n) : legendre_rule(n);
}

}  // namespace glvr
