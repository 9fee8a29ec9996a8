#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlf/frame.hpp"
#include "nlf/metric.hpp"
#include "oracles.hpp"

using namespace nlf;

namespace {

std::shared_ptr<const ChartSpec> chart22() { return std::make_shared<ChartSpec>(2, 2); }

Expression conformal() { return parse_lagrangian("exp(x1)*(y1^2+y2^2)", chart22()); }
Expression flat() { return parse_lagrangian("y1^2+y2^2", chart22()); }
Expression polar() { return parse_lagrangian("y1^2 + x1^2*y2^2", chart22()); }

ChartPoint pt4(double x1, double x2, double y1, double y2) {
    return ChartPoint(Eigen::Vector4d(x1, x2, y1, y2));
}

// Base metric of a quadratic Lagrangian L = g_ij(x) y^i y^j for the
// Christoffel oracle: the x-field only.
oracle::MatrixField polar_g = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd g(2, 2);
    g << 1.0, 0.0, 0.0, x(0) * x(0);
    return g;
};

oracle::MatrixField conformal_g = [](const Eigen::VectorXd& x) {
    return std::exp(x(0)) * Eigen::MatrixXd::Identity(2, 2);
};

} // namespace

TEST_CASE("hessian metric on the reference Lagrangians") {
    CHECK(hessian_metric(flat(), pt4(0.1, -0.4, 0.8, 1.2)).mat
              .isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-14));

    MetricBlock conf = hessian_metric(conformal(), pt4(0.3, 0.0, 1.0, 2.0));
    CHECK(conf.mat.isApprox(std::exp(0.3) * Eigen::MatrixXd::Identity(2, 2), 1e-12));

    // Independent finite-difference Hessian.
    Expression L = conformal();
    Eigen::VectorXd u(4);
    u << 0.3, -0.2, 0.9, 1.4;
    auto field = [&](const Eigen::VectorXd& p) { return L.eval_at(ChartPoint(p)); };
    MetricBlock g = hessian_metric(L, ChartPoint(u));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double ref = 0.5 * oracle::fd_partial(field, u, {2 + i, 2 + j});
            CHECK(g.mat(i, j) == doctest::Approx(ref).epsilon(1e-7));
        }

    // Indefinite but nondegenerate is accepted.
    MetricBlock bl = hessian_metric(parse_lagrangian("y1*y2", chart22()), pt4(0, 0, 1, 1));
    CHECK(bl.mat(0, 1) == doctest::Approx(0.5));
    CHECK(bl.det == doctest::Approx(-0.25));

    CHECK_THROWS_AS(hessian_metric(parse_lagrangian("y1^2", chart22()), pt4(0, 0, 1, 1)),
                    DegenerateHessian);
}

TEST_CASE("hessian blocks are exactly symmetric") {
    Expression L = parse_lagrangian("(y1^4+y2^4)^(1/2)", chart22());
    std::mt19937_64 gen(3);
    for (int t = 0; t < 10; ++t) {
        Eigen::VectorXd u = oracle::random_point(gen, 2, 2);
        MetricBlock g = hessian_metric(L, ChartPoint(u));
        CHECK(g.mat(0, 1) == g.mat(1, 0));  // bitwise, same jet coefficient
    }
}

TEST_CASE("spray coefficients") {
    CHECK(spray_coefficients(flat(), pt4(0.3, 0.1, 1.0, -0.7)).norm() == doctest::Approx(0.0));

    // Hand expansion for the conformal Lagrangian: G^i = y^i y^1 / 2 - |y|^2 delta_i1 / 4.
    Eigen::VectorXd G = spray_coefficients(conformal(), pt4(0.9, 0.2, 1.0, 2.0));
    CHECK(G(0) == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(G(1) == doctest::Approx(1.0).epsilon(1e-12));

    // Quadratic Lagrangian: G^i = 1/2 gamma^i_{jk} y^j y^k against the
    // finite-difference Christoffel oracle.
    std::mt19937_64 gen(5);
    for (int t = 0; t < 10; ++t) {
        Eigen::VectorXd u = oracle::random_point(gen, 2, 2, 0.5, 1.5);
        auto gamma = oracle::christoffel(polar_g, u.head(2));
        Eigen::Vector2d y = u.tail(2);
        Eigen::VectorXd G2 = spray_coefficients(polar(), ChartPoint(u));
        for (int i = 0; i < 2; ++i) {
            double ref = 0.5 * y.dot(gamma[i] * y);
            CHECK(G2(i) == doctest::Approx(ref).epsilon(1e-8).scale(1.0 + std::abs(ref)));
        }
    }
}

TEST_CASE("canonical N-connection") {
    NConnection n0 = NConnection::canonical(flat());
    CHECK(n0.at(pt4(0.2, 0.5, 1.1, -0.3)).norm() == doctest::Approx(0.0));

    NConnection nc = NConnection::canonical(conformal());
    Eigen::MatrixXd N = nc.at(pt4(0.4, -0.1, 1.0, 2.0));
    CHECK(N(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(N(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(N(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(N(1, 1) == doctest::Approx(0.5).epsilon(1e-12));

    // Riemannian reduction N^i_j = gamma^i_{jk} y^k for quadratic L.
    NConnection np = NConnection::canonical(polar());
    std::mt19937_64 gen(7);
    for (int t = 0; t < 10; ++t) {
        Eigen::VectorXd u = oracle::random_point(gen, 2, 2, 0.5, 1.5);
        auto gamma = oracle::christoffel(polar_g, u.head(2));
        Eigen::Vector2d y = u.tail(2);
        Eigen::MatrixXd Np = np.at(ChartPoint(u));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double ref = gamma[i].row(j).dot(y);
                CHECK(std::abs(Np(i, j) - ref) <= 1e-8 * (1.0 + std::abs(ref)));
            }
    }

    // Quadratic L makes N homogeneous of degree 1 in y.
    for (double lambda : {0.5, 2.0}) {
        ChartPoint u = pt4(0.7, 0.3, 0.8, 1.1);
        ChartPoint us = pt4(0.7, 0.3, lambda * 0.8, lambda * 1.1);
        CHECK((np.at(us) - lambda * np.at(u)).norm() <= 1e-10);
    }
}

TEST_CASE("nonholonomy coefficients") {
    // Zero N.
    Nonholonomy z = nonholonomy(NConnection::zero(2, 2), pt4(0, 0, 1, 1));
    for (double v : z.Omega.data()) CHECK(v == 0.0);
    for (double v : z.W.data()) CHECK(v == 0.0);

    // User-supplied N^3_1 = x2 (first fiber coefficient in 0-based indexing).
    auto c = chart22();
    std::vector<std::vector<Expression>> coeffs(
        2, std::vector<Expression>(2, parse_lagrangian("0", c)));
    coeffs[0][0] = parse_lagrangian("x2", c);
    NConnection nu = NConnection::from_expressions(c, coeffs);
    Nonholonomy nh = nonholonomy(nu, pt4(0.3, 0.8, 1.0, 1.0));
    CHECK(nh.Omega(0, 0, 1) == doctest::Approx(1.0));
    CHECK(nh.Omega(0, 1, 0) == doctest::Approx(-1.0));
    CHECK(nh.Omega(1, 0, 1) == doctest::Approx(0.0));

    // Commuting linear family: quadratic terms cancel, only the x-curl stays.
    std::vector<std::vector<Expression>> lin(
        2, std::vector<Expression>(2, parse_lagrangian("0", c)));
    lin[0][0] = parse_lagrangian("x2^2*y1", c);
    lin[0][1] = parse_lagrangian("x1*y1", c);
    NConnection nl = NConnection::from_expressions(c, lin);
    std::mt19937_64 gen(11);
    for (int t = 0; t < 5; ++t) {
        Eigen::VectorXd u = oracle::random_point(gen, 2, 2);
        Nonholonomy res = nonholonomy(nl, ChartPoint(u));
        double expected = (2.0 * u(1) - 1.0) * u(2);  // d2 N^1_1 - d1 N^1_2
        CHECK(res.Omega(0, 0, 1) == doctest::Approx(expected).epsilon(1e-12));
        // Antisymmetry holds exactly as evaluated.
        for (int a = 0; a < 2; ++a)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(res.Omega(a, i, j) == -res.Omega(a, j, i));
    }
}

TEST_CASE("sasaki d-metric") {
    DMetric flat_dm = DMetric::sasaki(flat());
    ChartPoint u = pt4(0.2, -0.6, 1.0, 0.5);
    CHECK(flat_dm.g_block(u).mat.isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-14));
    CHECK(flat_dm.h_block(u).mat.isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-14));
    CHECK(flat_dm.nmat(u).norm() == doctest::Approx(0.0));

    DMetric conf_dm = DMetric::sasaki(conformal());
    ChartPoint v = pt4(0.4, 0.0, 1.0, 2.0);
    CHECK(conf_dm.g_block(v).mat.isApprox(std::exp(0.4) * Eigen::MatrixXd::Identity(2, 2), 1e-12));
    CHECK(conf_dm.h_block(v).mat.isApprox(conf_dm.g_block(v).mat, 1e-14));

    Eigen::MatrixXd A = assemble_offdiagonal(conf_dm, v);
    CHECK((A - A.transpose()).norm() <= 1e-14);
}

TEST_CASE("off-diagonal assemble and decompose") {
    auto c11 = std::make_shared<ChartSpec>(1, 1);
    Eigen::MatrixXd g1(1, 1), h1(1, 1), N1(1, 1);
    g1 << 1.0;
    h1 << 1.0;
    N1 << 0.7;
    Eigen::MatrixXd A = assemble_offdiagonal(g1, h1, N1);
    CHECK(A(0, 0) == doctest::Approx(1.49));
    CHECK(A(0, 1) == doctest::Approx(0.7));
    CHECK(A(1, 1) == doctest::Approx(1.0));

    // Worked inverse: [[2,1],[1,1]] -> h = 1, N = 1, g = 1.
    Eigen::MatrixXd G(2, 2);
    G << 2, 1, 1, 1;
    DMetricPoint d = decompose_offdiagonal(G, 1, 1);
    CHECK(d.h(0, 0) == doctest::Approx(1.0));
    CHECK(d.N(0, 0) == doctest::Approx(1.0));
    CHECK(d.g(0, 0) == doctest::Approx(1.0));

    // Block-diagonal input has N = 0.
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 3);
    B(0, 0) = 2.0;
    B(1, 1) = 3.0;
    B(2, 2) = 4.0;
    CHECK(decompose_offdiagonal(B, 1, 2).N.norm() == doctest::Approx(0.0));

    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(2, 2);
    S(1, 1) = 0.0;
    CHECK_THROWS_AS(decompose_offdiagonal(S, 1, 1), SingularVBlock);

    // Round trips on random well-conditioned inputs.
    std::mt19937_64 gen(13);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        int n = 1 + static_cast<int>(gen() % 3);
        int m = 1 + static_cast<int>(gen() % 3);
        auto rand_spd = [&](int k) {
            Eigen::MatrixXd M(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) M(i, j) = dist(gen);
            return Eigen::MatrixXd(M * M.transpose() + 0.8 * Eigen::MatrixXd::Identity(k, k));
        };
        Eigen::MatrixXd g = rand_spd(n), h = rand_spd(m), N(m, n);
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < n; ++i) N(a, i) = dist(gen);

        DMetricPoint back = decompose_offdiagonal(assemble_offdiagonal(g, h, N), n, m);
        CHECK((back.g - g).norm() <= 1e-12 * (1.0 + g.norm()));
        CHECK((back.h - h).norm() <= 1e-12 * (1.0 + h.norm()));
        CHECK((back.N - N).norm() <= 1e-12 * (1.0 + N.norm()));

        // decompose-then-assemble on a symmetric matrix with invertible v-block.
        Eigen::MatrixXd M(n + m, n + m);
        for (int i = 0; i < n + m; ++i)
            for (int j = 0; j < n + m; ++j) M(i, j) = dist(gen);
        Eigen::MatrixXd sym = M * M.transpose() + 0.8 * Eigen::MatrixXd::Identity(n + m, n + m);
        DMetricPoint parts = decompose_offdiagonal(sym, n, m);
        Eigen::MatrixXd re = assemble_offdiagonal(parts.g, parts.h, parts.N);
        CHECK((re - sym).norm() <= 1e-12 * (1.0 + sym.norm()));
    }
}

TEST_CASE("adapted frames diagonalize the ansatz") {
    DMetric dm = DMetric::sasaki(conformal());
    std::mt19937_64 gen(17);
    for (int t = 0; t < 20; ++t) {
        ChartPoint u{oracle::random_point(gen, 2, 2)};
        AdaptedFrame f = adapted_frame(dm.nconnection(), u);
        CHECK((f.e * f.theta - Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-12);

        Eigen::MatrixXd A = assemble_offdiagonal(dm, u);
        Eigen::MatrixXd diag = f.theta * A * f.theta.transpose();
        Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
        expected.topLeftCorner(2, 2) = dm.g_block(u).mat;
        expected.bottomRightCorner(2, 2) = dm.h_block(u).mat;
        CHECK((diag - expected).norm() <= 1e-10);
    }

    CHECK(adapted_frame(Eigen::MatrixXd::Zero(2, 2)).e
              .isApprox(Eigen::MatrixXd::Identity(4, 4), 1e-15));
}

TEST_CASE("almost complex structure") {
    Eigen::MatrixXd F1 = almost_complex(Eigen::MatrixXd::Zero(1, 1));
    CHECK(F1(0, 1) == doctest::Approx(-1.0));
    CHECK(F1(1, 0) == doctest::Approx(1.0));

    DMetric dm = DMetric::sasaki(conformal());
    std::mt19937_64 gen(19);
    for (int t = 0; t < 10; ++t) {
        ChartPoint u{oracle::random_point(gen, 2, 2)};
        Eigen::MatrixXd F = almost_complex(dm.nconnection(), u);
        CHECK((F * F + Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-12);
        CHECK(std::abs(F.trace()) <= 1e-12);

        // Constant in the adapted basis, N-dependent in coordinates.
        AdaptedFrame f = adapted_frame(dm.nconnection(), u);
        Eigen::MatrixXd F0 = Eigen::MatrixXd::Zero(4, 4);
        F0.topRightCorner(2, 2) = -Eigen::MatrixXd::Identity(2, 2);
        F0.bottomLeftCorner(2, 2) = Eigen::MatrixXd::Identity(2, 2);
        Eigen::MatrixXd back = f.e.transpose() * F * f.theta.transpose();
        CHECK((back - F0).norm() <= 1e-12);
        if (dm.nmat(u).norm() > 1e-8) CHECK((F - F0).norm() > 1e-8);
    }

    CHECK_THROWS_AS(almost_complex(Eigen::MatrixXd::Zero(2, 1)), DimensionMismatch);
}
