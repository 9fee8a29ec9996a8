#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "nlf/chart.hpp"
#include "nlf/errors.hpp"
#include "nlf/jet.hpp"

namespace nlf {

// Scalar hooks so the templated evaluation below behaves identically for
// doubles and jets: singular inputs raise DomainError instead of NaN.
inline double pow(double base, long long num, long long den) {
    if (den == 0) throw DomainError("power with zero denominator");
    if (den < 0) { den = -den; num = -num; }
    if (den != 1 && base <= 0.0)
        throw DomainError("fractional power of a non-positive base");
    if (den == 1 && num < 0 && base == 0.0) throw DomainError("zero raised to a negative power");
    return std::pow(base, static_cast<double>(num) / static_cast<double>(den));
}

inline double checked_log(double v) {
    if (v <= 0.0) throw DomainError("log of a non-positive value");
    return std::log(v);
}
inline double checked_sqrt(double v) {
    if (v <= 0.0) throw DomainError("sqrt of a non-positive value");
    return std::sqrt(v);
}
inline double divide(double a, double b) {
    if (b == 0.0) throw DomainError("division by zero");
    return a / b;
}

inline Jet checked_log(const Jet& v) { return log(v); }
inline Jet checked_sqrt(const Jet& v) { return sqrt(v); }
inline Jet divide(const Jet& a, const Jet& b) { return a / b; }

inline double apply_exp(double v) { return std::exp(v); }
inline double apply_sin(double v) { return std::sin(v); }
inline double apply_cos(double v) { return std::cos(v); }
inline Jet apply_exp(const Jet& v) { return exp(v); }
inline Jet apply_sin(const Jet& v) { return sin(v); }
inline Jet apply_cos(const Jet& v) { return cos(v); }

enum class ExprOp {
    constant,
    variable,
    neg,
    exp_fn,
    log_fn,
    sqrt_fn,
    sin_fn,
    cos_fn,
    add,
    sub,
    mul,
    div,
    pow_op,  // rational exponent stored on the node
};

struct ExprNode {
    ExprOp op = ExprOp::constant;
    double value = 0.0;        // constant
    int var = -1;              // variable
    long long pow_num = 1;     // pow
    long long pow_den = 1;
    int a = -1;                // children (indices into the node pool)
    int b = -1;
};

// Immutable expression tree over a chart's coordinates. Nodes live in a flat
// pool with children preceding parents, so evaluation is one forward sweep.
// Evaluation is pure and safe to run concurrently.
class Expression {
public:
    Expression() = default;
    Expression(std::shared_ptr<const ChartSpec> chart, std::vector<ExprNode> nodes, int root)
        : chart_(std::move(chart)), nodes_(std::move(nodes)), root_(root) {}

    const ChartSpec& chart() const { return *chart_; }
    std::shared_ptr<const ChartSpec> chart_ptr() const { return chart_; }
    const std::vector<ExprNode>& nodes() const { return nodes_; }
    int root() const { return root_; }
    bool empty() const { return nodes_.empty(); }

    bool same_structure(const Expression& other) const {
        if (nodes_.size() != other.nodes_.size() || root_ != other.root_) return false;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const ExprNode& p = nodes_[i];
            const ExprNode& q = other.nodes_[i];
            if (p.op != q.op || p.value != q.value || p.var != q.var || p.a != q.a ||
                p.b != q.b || p.pow_num != q.pow_num || p.pow_den != q.pow_den)
                return false;
        }
        return true;
    }

    template <class T>
    T eval(const std::vector<T>& coords) const {
        if (coords.size() != static_cast<std::size_t>(chart_->dim()))
            throw DimensionMismatch("coordinate vector does not match chart dimension");
        std::vector<T> v(nodes_.size());
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            const ExprNode& nd = nodes_[k];
            const std::size_t a = static_cast<std::size_t>(nd.a);
            const std::size_t b = static_cast<std::size_t>(nd.b);
            switch (nd.op) {
                case ExprOp::constant: v[k] = T(nd.value); break;
                case ExprOp::variable: v[k] = coords[static_cast<std::size_t>(nd.var)]; break;
                case ExprOp::neg: v[k] = -v[a]; break;
                case ExprOp::exp_fn: v[k] = apply_exp(v[a]); break;
                case ExprOp::log_fn: v[k] = checked_log(v[a]); break;
                case ExprOp::sqrt_fn: v[k] = checked_sqrt(v[a]); break;
                case ExprOp::sin_fn: v[k] = apply_sin(v[a]); break;
                case ExprOp::cos_fn: v[k] = apply_cos(v[a]); break;
                case ExprOp::add: v[k] = v[a] + v[b]; break;
                case ExprOp::sub: v[k] = v[a] - v[b]; break;
                case ExprOp::mul: v[k] = v[a] * v[b]; break;
                case ExprOp::div: v[k] = divide(v[a], v[b]); break;
                case ExprOp::pow_op: v[k] = pow(v[a], nd.pow_num, nd.pow_den); break;
            }
        }
        return v[static_cast<std::size_t>(root_)];
    }

    double eval_at(const ChartPoint& u) const {
        std::vector<double> coords(static_cast<std::size_t>(u.dim()));
        for (int i = 0; i < u.dim(); ++i) coords[static_cast<std::size_t>(i)] = u[i];
        return eval(coords);
    }

    std::string print() const;

private:
    std::shared_ptr<const ChartSpec> chart_;
    std::vector<ExprNode> nodes_;
    int root_ = -1;
};

// Parses the calculator grammar documented in the repo: pow > unary > mul/div
// > add/sub, left-associative binaries, '^' takes an integer or parenthesized
// rational exponent. Variables must be declared chart coordinates.
Expression parse_lagrangian(const std::string& text, std::shared_ptr<const ChartSpec> chart);

// Evaluates an expression on caller-supplied jet seeds (one per coordinate).
Jet evaluate_on_jets(const Expression& e, const std::vector<Jet>& seeds);

// True partial derivative at u for a multi-index of total degree <= 4.
double partial(const Expression& e, const ChartPoint& u, const MultiIndex& idx);

// Samples |L(x, lambda y) - lambda^2 L(x, y)| over random points and
// lambda in {0.5, 2, 3}; true when every sample passes the relative test.
bool check_homogeneity(const Expression& e, const ChartSpec& chart, int samples,
                       std::uint64_t seed = 20240915u);

} // namespace nlf
