#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace glvr {

enum class RuleKind { laguerre, legendre };

std::string_view to_string(RuleKind kind);

struct PolyValue {
    double value = 0.0;
    double derivative = 0.0;
};

// L_n(x) and L_n'(x) by the three-term recurrence
//   (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1},   L'_{k+1} = L'_k - L_k.
PolyValue laguerre_eval(int n, double x);

// P_n(x) and P_n'(x) by the Bonnet recurrence
//   (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1},   P'_{k+1} = P'_{k-1} + (2k+1) P_k.
PolyValue legendre_eval(int n, double x);

// Ordered nodes and positive weights of an n-point Gauss rule.
// Laguerre rules integrate against e^{-x} on [0, inf), Legendre rules
// against 1 on [-1, 1]. Immutable once built.
class QuadratureRule {
public:
    QuadratureRule(RuleKind kind, std::vector<double> nodes, std::vector<double> weights);

    RuleKind kind() const { return kind_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    double node(int i) const { return nodes_[static_cast<size_t>(i)]; }
    double weight(int i) const { return weights_[static_cast<size_t>(i)]; }
    double weight_sum() const;

private:
    RuleKind kind_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

inline constexpr int kMaxRuleSize = 64;

// Nodes are the roots of L_n found by bracketed Newton iteration; weights use
// w_i = 1 / (x_i [L_n'(x_i)]^2). Rules with n <= 32 are built once and cached.
// Throws UsageError for n outside [1, 64], NumericalError if a root fails to converge.
QuadratureRule laguerre_rule(int n);
QuadratureRule legendre_rule(int n);
QuadratureRule make_rule(RuleKind kind, int n);

// The two closed forms of the n-point Gauss-Laguerre weight at node x.
double laguerre_weight_from_derivative(int n, double x);  // 1 / (x L_n'(x)^2)
double laguerre_weight_from_next(int n, double x);        // x / ((n+1)^2 L_{n+1}(x)^2)

template <class F>
double integrate(const QuadratureRule& rule, F&& f) {
    double sum = 0.0;
    for (int i = 0; i < rule.size(); ++i) sum += rule.weight(i) * f(rule.node(i));
    return sum;
}

}  // namespace glvr
