#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "nlf/chart.hpp"
#include "nlf/dense.hpp"
#include "nlf/expr.hpp"
#include "nlf/input.hpp"

namespace nlf {

// A symmetric metric block evaluated at a point, with its invertibility
// report. Indefinite but nondegenerate blocks are accepted; rank deficiency
// raises DegenerateHessian.
struct MetricBlock {
    Eigen::MatrixXd mat;
    ChartPoint point;
    double det = 0.0;
    double cond = 0.0;
};

MetricBlock checked_block(Eigen::MatrixXd m, const ChartPoint& u);

// g_ij = 1/2 d^2 L / dy^i dy^j as jets of the requested order (order + 2
// derivatives of L overall).
JetMatrix hessian_jets(const Expression& L, const ChartPoint& u, int order);
MetricBlock hessian_metric(const Expression& L, const ChartPoint& u);

// Spray coefficients G^i = 1/4 g^{ij} (d^2L/dy^j dx^k y^k - dL/dx^j). The
// contraction runs over j; see the repo docs for the index convention.
std::vector<Jet> spray_jets(const Expression& L, const ChartPoint& u, int order);
Eigen::VectorXd spray_coefficients(const Expression& L, const ChartPoint& u);

// N-connection coefficients N^a_i as an (m x n)-matrix-valued function,
// evaluated on demand as jets. Closures are immutable and shareable.
class NConnection {
public:
    using JetFn = std::function<JetMatrix(const ChartPoint&, int)>;

    NConnection() = default;
    NConnection(int n, int m, int max_order, JetFn fn)
        : n_(n), m_(m), max_order_(max_order), fn_(std::move(fn)) {}

    static NConnection zero(int n, int m);
    // Canonical choice N^i_j = dG^i/dy^j from the spray of L (n == m).
    static NConnection canonical(const Expression& L);
    static NConnection from_expressions(std::shared_ptr<const ChartSpec> chart,
                                        std::vector<std::vector<Expression>> coeffs);

    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }
    int max_order() const noexcept { return max_order_; }

    JetMatrix jets(const ChartPoint& u, int order) const;
    Eigen::MatrixXd at(const ChartPoint& u) const { return values(jets(u, 0)); }

private:
    int n_ = 0;
    int m_ = 0;
    int max_order_ = 0;
    JetFn fn_;
};

// Anholonomy data of the N-adapted frame: W^b_{ia} = dN^b_i/dy^a and the
// N-curvature Omega^a_{ij}, antisymmetric in (i, j).
struct Nonholonomy {
    Tensor3<double> W;      // (b, i, a)
    Tensor3<double> Omega;  // (a, i, j)
};

Nonholonomy nonholonomy(const NConnection& N, const ChartPoint& u);

// Jet-valued Omega for internal consumers (curvature), one order less than
// the N jets it differentiates.
Tensor3<Jet> nonholonomy_jets(const JetMatrix& njets, int n, int m);

// Block d-metric [g, h] with an N-connection. Either lifted from a regular
// Lagrangian (Sasaki: g = h = Hessian metric, canonical N) or assembled from
// user expressions.
class DMetric {
public:
    static DMetric sasaki(const Expression& L);
    static DMetric from_expressions(std::shared_ptr<const ChartSpec> chart,
                                    std::vector<std::vector<Expression>> g,
                                    std::vector<std::vector<Expression>> h,
                                    std::vector<std::vector<Expression>> N);
    static DMetric from_problem(const ProblemInput& input);

    const ChartSpec& chart() const { return *chart_; }
    std::shared_ptr<const ChartSpec> chart_ptr() const { return chart_; }
    int n() const { return chart_->n(); }
    int m() const { return chart_->m(); }

    bool lagrangian_backed() const { return lagrangian_.has_value(); }
    const Expression& lagrangian() const { return *lagrangian_; }

    JetMatrix g_jets(const ChartPoint& u, int order) const;
    JetMatrix h_jets(const ChartPoint& u, int order) const;
    JetMatrix n_jets(const ChartPoint& u, int order) const { return N_.jets(u, order); }
    const NConnection& nconnection() const { return N_; }

    MetricBlock g_block(const ChartPoint& u) const;
    MetricBlock h_block(const ChartPoint& u) const;
    Eigen::MatrixXd nmat(const ChartPoint& u) const { return N_.at(u); }

    int max_block_order() const { return lagrangian_ ? 2 : JetContext::kMaxOrder; }
    int max_n_order() const { return N_.max_order(); }

private:
    DMetric() = default;

    std::shared_ptr<const ChartSpec> chart_;
    std::optional<Expression> lagrangian_;
    std::vector<std::vector<Expression>> g_exprs_;
    std::vector<std::vector<Expression>> h_exprs_;
    NConnection N_;
};

DMetric sasaki_dmetric(const Expression& L);

} // namespace nlf
