#include <limits>

#include "nlf/metric.hpp"

#include "nlf/frame.hpp"

namespace nlf {
namespace {

std::vector<Jet> seeds_for(const ChartPoint& u, int derivatives_needed) {
    if (derivatives_needed > JetContext::kMaxOrder)
        throw DomainError("operation needs derivative order " +
                          std::to_string(derivatives_needed) + ", above the jet cap of " +
                          std::to_string(JetContext::kMaxOrder));
    return Jet::seed(u, derivatives_needed);
}

JetMatrix hessian_from_ljet(const Jet& ljet, int n) {
    JetMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
        Jet di = ljet.derivative(n + i);
        for (int j = i; j < n; ++j) {
            Jet gij = 0.5 * di.derivative(n + j);
            g(i, j) = gij;
            if (j != i) g(j, i) = gij;
        }
    }
    return g;
}

} // namespace

MetricBlock checked_block(Eigen::MatrixXd m, const ChartPoint& u) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    double smax = sv(0);
    double smin = sv(sv.size() - 1);
    double det = m.determinant();
    double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (smax <= 0.0 || smin <= 1e-10 * smax) throw DegenerateHessian(det, cond);
    return MetricBlock{std::move(m), u, det, cond};
}

JetMatrix hessian_jets(const Expression& L, const ChartPoint& u, int order) {
    const ChartSpec& chart = L.chart();
    if (chart.n() != chart.m())
        throw DimensionMismatch("Hessian metric needs the tangent-bundle model n == m");
    Jet ljet = L.eval(seeds_for(u, order + 2));
    return hessian_from_ljet(ljet, chart.n());
}

MetricBlock hessian_metric(const Expression& L, const ChartPoint& u) {
    return checked_block(values(hessian_jets(L, u, 0)), u);
}

std::vector<Jet> spray_jets(const Expression& L, const ChartPoint& u, int order) {
    const ChartSpec& chart = L.chart();
    if (chart.n() != chart.m())
        throw DimensionMismatch("spray coefficients need the tangent-bundle model n == m");
    const int n = chart.n();
    auto seeds = seeds_for(u, order + 2);
    Jet ljet = L.eval(seeds);

    JetMatrix g = hessian_from_ljet(ljet, n);
    JetMatrix ginv;
    try {
        ginv = inverse(g);
    } catch (const DomainError&) {
        MetricBlock b = checked_block(values(g), u);  // produces the detailed error
        throw DegenerateHessian(b.det, b.cond);       // unreachable fallback
    }

    std::vector<Jet> rhs(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        Jet dyj = ljet.derivative(n + j);
        Jet acc = -ljet.derivative(j);
        for (int k = 0; k < n; ++k) acc += dyj.derivative(k) * seeds[static_cast<std::size_t>(n + k)];
        rhs[static_cast<std::size_t>(j)] = acc;
    }

    std::vector<Jet> G(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Jet acc = Jet(0.0);
        for (int j = 0; j < n; ++j) acc += ginv(i, j) * rhs[static_cast<std::size_t>(j)];
        G[static_cast<std::size_t>(i)] = 0.25 * acc;
    }
    return G;
}

Eigen::VectorXd spray_coefficients(const Expression& L, const ChartPoint& u) {
    auto G = spray_jets(L, u, 0);
    Eigen::VectorXd out(static_cast<int>(G.size()));
    for (std::size_t i = 0; i < G.size(); ++i) out(static_cast<int>(i)) = G[i].value();
    return out;
}

NConnection NConnection::zero(int n, int m) {
    return NConnection(n, m, JetContext::kMaxOrder,
                       [n, m](const ChartPoint&, int) {
                           JetMatrix z(m, n);
                           return z;  // default jets are constant zero
                       });
}

NConnection NConnection::canonical(const Expression& L) {
    const ChartSpec& chart = L.chart();
    if (chart.n() != chart.m())
        throw DimensionMismatch("canonical N-connection needs n == m");
    const int n = chart.n();
    Expression copy = L;
    // G needs two derivative orders of L, N one more: jets cap at order 1.
    return NConnection(n, n, 1, [copy, n](const ChartPoint& u, int order) {
        auto G = spray_jets(copy, u, order + 1);
        JetMatrix N(n, n);
        for (int a = 0; a < n; ++a)
            for (int i = 0; i < n; ++i)
                N(a, i) = G[static_cast<std::size_t>(a)].derivative(n + i);
        return N;
    });
}

NConnection NConnection::from_expressions(std::shared_ptr<const ChartSpec> chart,
                                          std::vector<std::vector<Expression>> coeffs) {
    const int n = chart->n();
    const int m = chart->m();
    if (static_cast<int>(coeffs.size()) != m ||
        (m > 0 && static_cast<int>(coeffs[0].size()) != n))
        throw DimensionMismatch("N-connection expression grid must be m x n");
    auto grid = std::make_shared<std::vector<std::vector<Expression>>>(std::move(coeffs));
    return NConnection(n, m, JetContext::kMaxOrder,
                       [grid, n, m](const ChartPoint& u, int order) {
                           auto seeds = Jet::seed(u, order);
                           JetMatrix N(m, n);
                           for (int a = 0; a < m; ++a)
                               for (int i = 0; i < n; ++i)
                                   N(a, i) = (*grid)[static_cast<std::size_t>(a)]
                                                    [static_cast<std::size_t>(i)].eval(seeds);
                           return N;
                       });
}

JetMatrix NConnection::jets(const ChartPoint& u, int order) const {
    if (order > max_order_)
        throw DomainError("N-connection jets available up to order " +
                          std::to_string(max_order_) + ", requested " + std::to_string(order));
    return fn_(u, order);
}

Tensor3<Jet> nonholonomy_jets(const JetMatrix& njets, int n, int m) {
    Tensor3<Jet> omega(m, n, n);
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                // dN^a_i/dx^j - dN^a_j/dx^i + N^b_i dN^a_j/dy^b - N^b_j dN^a_i/dy^b
                Jet acc = njets(a, i).derivative(j) - njets(a, j).derivative(i);
                for (int b = 0; b < m; ++b)
                    acc += njets(b, i) * njets(a, j).derivative(n + b) -
                           njets(b, j) * njets(a, i).derivative(n + b);
                omega(a, i, j) = acc;
                omega(a, j, i) = -acc;
            }
    return omega;
}

Nonholonomy nonholonomy(const NConnection& N, const ChartPoint& u) {
    const int n = N.n();
    const int m = N.m();
    JetMatrix nj = N.jets(u, 1);
    Nonholonomy out{Tensor3<double>(m, n, m), Tensor3<double>(m, n, n)};
    for (int b = 0; b < m; ++b)
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < m; ++a)
                out.W(b, i, a) = nj(b, i).derivative(n + a).value();
    Tensor3<Jet> omega = nonholonomy_jets(nj, n, m);
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out.Omega(a, i, j) = omega(a, i, j).value();
    return out;
}

DMetric DMetric::sasaki(const Expression& L) {
    const ChartSpec& chart = L.chart();
    if (chart.n() != chart.m())
        throw DimensionMismatch("Sasaki lift needs the tangent-bundle model n == m");
    DMetric dm;
    dm.chart_ = L.chart_ptr();
    dm.lagrangian_ = L;
    dm.N_ = NConnection::canonical(L);
    return dm;
}

DMetric DMetric::from_expressions(std::shared_ptr<const ChartSpec> chart,
                                  std::vector<std::vector<Expression>> g,
                                  std::vector<std::vector<Expression>> h,
                                  std::vector<std::vector<Expression>> N) {
    DMetric dm;
    dm.chart_ = chart;
    dm.g_exprs_ = std::move(g);
    dm.h_exprs_ = std::move(h);
    dm.N_ = NConnection::from_expressions(chart, std::move(N));
    const int n = chart->n(), m = chart->m();
    if (static_cast<int>(dm.g_exprs_.size()) != n ||
        static_cast<int>(dm.h_exprs_.size()) != m)
        throw DimensionMismatch("metric expression grids must be n x n and m x m");
    return dm;
}

DMetric DMetric::from_problem(const ProblemInput& input) {
    if (input.is_lagrangian()) return sasaki(*input.lagrangian);
    return from_expressions(input.chart, input.g, input.h, input.N);
}

JetMatrix DMetric::g_jets(const ChartPoint& u, int order) const {
    if (lagrangian_) return hessian_jets(*lagrangian_, u, order);
    const int n = chart_->n();
    auto seeds = Jet::seed(u, order);
    JetMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = g_exprs_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(seeds);
    return g;
}

JetMatrix DMetric::h_jets(const ChartPoint& u, int order) const {
    if (lagrangian_) return hessian_jets(*lagrangian_, u, order);  // Sasaki: h = g
    const int m = chart_->m();
    auto seeds = Jet::seed(u, order);
    JetMatrix h(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            h(a, b) = h_exprs_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].eval(seeds);
    return h;
}

MetricBlock DMetric::g_block(const ChartPoint& u) const {
    return checked_block(values(g_jets(u, 0)), u);
}

MetricBlock DMetric::h_block(const ChartPoint& u) const {
    return checked_block(values(h_jets(u, 0)), u);
}

DMetric sasaki_dmetric(const Expression& L) { return DMetric::sasaki(L); }

// ---- frame operations ----

AdaptedFrame adapted_frame(const Eigen::MatrixXd& N) {
    const int m = static_cast<int>(N.rows());
    const int n = static_cast<int>(N.cols());
    const int d = n + m;
    AdaptedFrame f{Eigen::MatrixXd::Identity(d, d), Eigen::MatrixXd::Identity(d, d)};
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < m; ++a) {
            f.e(i, n + a) = N(a, i);
            f.theta(i, n + a) = -N(a, i);
        }
    return f;
}

AdaptedFrame adapted_frame(const NConnection& N, const ChartPoint& u) {
    return adapted_frame(N.at(u));
}

Eigen::MatrixXd assemble_offdiagonal(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h,
                                     const Eigen::MatrixXd& N) {
    const int n = static_cast<int>(g.rows());
    const int m = static_cast<int>(h.rows());
    Eigen::MatrixXd G(n + m, n + m);
    G.topLeftCorner(n, n) = g + N.transpose() * h * N;
    G.topRightCorner(n, m) = N.transpose() * h;
    G.bottomLeftCorner(m, n) = h * N;
    G.bottomRightCorner(m, m) = h;
    return G;
}

Eigen::MatrixXd assemble_offdiagonal(const DMetric& dm, const ChartPoint& u) {
    return assemble_offdiagonal(dm.g_block(u).mat, dm.h_block(u).mat, dm.nmat(u));
}

DMetricPoint decompose_offdiagonal(const Eigen::MatrixXd& G, int n, int m) {
    if (G.rows() != n + m || G.cols() != n + m)
        throw DimensionMismatch("off-diagonal matrix does not match the (n, m) split");
    Eigen::MatrixXd h = G.bottomRightCorner(m, m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0 || sv(sv.size() - 1) <= 1e-12 * sv(0))
        throw SingularVBlock("lower-right block is numerically singular");
    Eigen::MatrixXd N = svd.solve(G.bottomLeftCorner(m, n));
    Eigen::MatrixXd g = G.topLeftCorner(n, n) - N.transpose() * h * N;
    return DMetricPoint{std::move(g), std::move(h), std::move(N)};
}

Eigen::MatrixXd almost_complex(const Eigen::MatrixXd& N) {
    const int m = static_cast<int>(N.rows());
    const int n = static_cast<int>(N.cols());
    if (n != m) throw DimensionMismatch("almost complex structure needs n == m");
    Eigen::MatrixXd F0 = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    F0.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    F0.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);

    // Adapted basis vectors as coordinate columns: E = [I 0; -N I].
    Eigen::MatrixXd E = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    E.bottomLeftCorner(n, n) = -N;
    Eigen::MatrixXd Einv = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    Einv.bottomLeftCorner(n, n) = N;
    return E * F0 * Einv;
}

Eigen::MatrixXd almost_complex(const NConnection& N, const ChartPoint& u) {
    return almost_complex(N.at(u));
}

} // namespace nlf
