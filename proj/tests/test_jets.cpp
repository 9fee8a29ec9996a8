#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlf/expr.hpp"
#include "nlf/jet.hpp"
#include "oracles.hpp"

using namespace nlf;

namespace {

MultiIndex mi(std::initializer_list<int> counts) {
    MultiIndex m{};
    int v = 0;
    for (int c : counts) m[static_cast<std::size_t>(v++)] = static_cast<std::uint8_t>(c);
    return m;
}

std::shared_ptr<const ChartSpec> chart(int n, int m) {
    return std::make_shared<ChartSpec>(n, m);
}

} // namespace

TEST_CASE("seed jets carry the identity structure") {
    auto c11 = chart(1, 1);
    ChartPoint u(Eigen::Vector2d(2.0, 5.0));

    auto seeds1 = Jet::seed(u, 1);
    CHECK(seeds1[0].value() == doctest::Approx(2.0));
    CHECK(seeds1[0].coefficient(mi({1, 0})) == doctest::Approx(1.0));
    CHECK(seeds1[0].coefficient(mi({0, 1})) == doctest::Approx(0.0));
    CHECK(seeds1[1].value() == doctest::Approx(5.0));
    CHECK(seeds1[1].coefficient(mi({0, 1})) == doctest::Approx(1.0));

    auto seeds0 = Jet::seed(u, 0);
    CHECK(seeds0[0].order() == 0);
    CHECK(seeds0[0].coefficients().size() == 1);

    CHECK_THROWS_AS(Jet::seed(u, 5), DomainError);
}

TEST_CASE("product rule on x1*y1") {
    auto c = chart(1, 1);
    Expression e = parse_lagrangian("x1*y1", c);
    ChartPoint u(Eigen::Vector2d(2.0, 3.0));
    Jet j = evaluate_on_jets(e, Jet::seed(u, 2));
    CHECK(j.value() == doctest::Approx(6.0));
    CHECK(j.partial(mi({1, 0})) == doctest::Approx(3.0));
    CHECK(j.partial(mi({0, 1})) == doctest::Approx(2.0));
    CHECK(j.partial(mi({1, 1})) == doctest::Approx(1.0));
}

TEST_CASE("taylor coefficients of exp at 0") {
    auto c = chart(1, 1);
    Expression e = parse_lagrangian("exp(x1)", c);
    ChartPoint u(Eigen::Vector2d(0.0, 1.0));
    Jet j = evaluate_on_jets(e, Jet::seed(u, 4));
    CHECK(j.coefficient(mi({0, 0})) == doctest::Approx(1.0));
    CHECK(j.coefficient(mi({1, 0})) == doctest::Approx(1.0));
    CHECK(j.coefficient(mi({2, 0})) == doctest::Approx(0.5));
    CHECK(j.coefficient(mi({3, 0})) == doctest::Approx(1.0 / 6.0));
    CHECK(j.coefficient(mi({4, 0})) == doctest::Approx(1.0 / 24.0));
}

TEST_CASE("pole raises DomainError") {
    auto c = chart(1, 1);
    Expression e = parse_lagrangian("y1^2/(x1-1)", c);
    ChartPoint u(Eigen::Vector2d(1.0, 2.0));
    CHECK_THROWS_AS(evaluate_on_jets(e, Jet::seed(u, 2)), DomainError);
}

TEST_CASE("simple partials") {
    auto c22 = chart(2, 2);
    Expression e1 = parse_lagrangian("y1^2+y2^2", c22);
    ChartPoint u(Eigen::Vector4d(0.3, -0.2, 1.1, 0.7));
    CHECK(partial(e1, u, mi({0, 0, 2, 0})) == doctest::Approx(2.0));

    Expression e2 = parse_lagrangian("exp(x1)*(y1^2+y2^2)", c22);
    ChartPoint u0(Eigen::Vector4d(0.0, 0.0, 1.0, 2.0));
    CHECK(partial(e2, u0, mi({1, 0, 2, 0})) == doctest::Approx(2.0));

    auto c12 = chart(1, 2);
    Expression e3 = parse_lagrangian("x1*y1*y2", c12);
    ChartPoint v(Eigen::Vector3d(0.4, 0.9, -1.2));
    CHECK(partial(e3, v, mi({1, 1, 1})) == doctest::Approx(1.0));
}

TEST_CASE("degree-4 polynomial jets are exact") {
    auto c = chart(2, 2);
    // L = 3 x1^2 y1^2 + x2 y2^3 - 2 x1 x2 y1 y2
    Expression e = parse_lagrangian("3*x1^2*y1^2 + x2*y2^3 - 2*x1*x2*y1*y2", c);
    ChartPoint u(Eigen::Vector4d(1.3, -0.7, 0.9, 1.8));
    Jet j = e.eval(Jet::seed(u, 4));

    // Hand values.
    const double x1 = 1.3, x2 = -0.7, y1 = 0.9, y2 = 1.8;
    CHECK(j.value() == doctest::Approx(3 * x1 * x1 * y1 * y1 + x2 * y2 * y2 * y2 -
                                       2 * x1 * x2 * y1 * y2).epsilon(1e-12));
    CHECK(j.partial(mi({2, 0, 2, 0})) == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(j.partial(mi({0, 1, 0, 3})) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(j.partial(mi({1, 1, 1, 1})) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(j.partial(mi({0, 1, 0, 2})) == doctest::Approx(6.0 * y2).epsilon(1e-12));
}

TEST_CASE("jet partials match finite differences on smooth expressions") {
    auto c = chart(2, 2);
    const char* exprs[] = {
        "exp(x1)*sin(y1) + x2*y2^2",
        "log(3 + x1 + x2)*sqrt(1 + y1^2 + y2^2)",
        "(1 + x1^2 + y1^2 + y2^2)^(1/2)",
        "cos(x1*y1) + y2^4/(2 + x2^2)",
        "(y1^2 + y2^2)^2 / (1 + exp(x1 - x2))",
    };
    std::mt19937_64 gen(7);
    for (const char* src : exprs) {
        Expression e = parse_lagrangian(src, c);
        Eigen::VectorXd u = oracle::random_point(gen, 2, 2);
        auto field = [&](const Eigen::VectorXd& p) { return e.eval_at(ChartPoint(p)); };
        auto jet = e.eval(Jet::seed(ChartPoint(u), 4));

        const std::vector<std::vector<int>> tests = {
            {0}, {2}, {1, 3}, {2, 2}, {0, 1, 2}, {2, 3, 3}, {0, 0, 2, 3}, {2, 2, 3, 3}};
        for (const auto& dirs : tests) {
            MultiIndex idx{};
            for (int d : dirs) ++idx[static_cast<std::size_t>(d)];
            double ours = jet.partial(idx);
            double ref = oracle::fd_partial(field, u, dirs);
            double tol = dirs.size() <= 2 ? 1e-6 : 1e-4;
            CHECK(std::abs(ours - ref) <= tol * (1.0 + std::abs(ref)));
        }
    }
}

TEST_CASE("leibniz rule holds coefficient-wise on random pairs") {
    auto c = chart(1, 1);
    const char* fs[] = {"exp(x1)*y1", "sin(x1) + y1^2", "sqrt(1 + y1^2)"};
    const char* gs[] = {"cos(y1)", "x1^2*y1 - 1", "1/(2 + x1)"};
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 3; ++trial) {
        Expression f = parse_lagrangian(fs[trial], c);
        Expression g = parse_lagrangian(gs[trial], c);
        Expression fg = parse_lagrangian(std::string("(") + fs[trial] + ")*(" + gs[trial] + ")", c);
        Eigen::VectorXd u = oracle::random_point(gen, 1, 1);
        ChartPoint p(u);

        Jet jf = f.eval(Jet::seed(p, 4));
        Jet jg = g.eval(Jet::seed(p, 4));
        Jet jfg = fg.eval(Jet::seed(p, 4));

        // d^(a,b)(fg) = sum over splits with binomial weights.
        auto binom = [](int n, int k) {
            double r = 1;
            for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
            return r;
        };
        for (int a = 0; a <= 4; ++a)
            for (int b = 0; a + b <= 4; ++b) {
                double convo = 0.0;
                for (int i = 0; i <= a; ++i)
                    for (int j = 0; j <= b; ++j)
                        convo += binom(a, i) * binom(b, j) *
                                 jf.partial(mi({i, j})) * jg.partial(mi({a - i, b - j}));
                CHECK(jfg.partial(mi({a, b})) ==
                      doctest::Approx(convo).epsilon(1e-10).scale(1.0 + std::abs(convo)));
            }
    }
}

TEST_CASE("derivative order does not matter") {
    auto c = chart(2, 2);
    Expression e = parse_lagrangian("exp(x1*y2) + sin(x2)*y1^3", c);
    ChartPoint u(Eigen::Vector4d(0.2, 0.7, 1.2, 0.4));
    Jet j = e.eval(Jet::seed(u, 4));
    Jet d_ab = j.derivative(0).derivative(3);
    Jet d_ba = j.derivative(3).derivative(0);
    for (int k = 0; k < d_ab.coefficients().size(); ++k)
        CHECK(d_ab.coefficients()(k) == doctest::Approx(d_ba.coefficients()(k)).epsilon(1e-13));
}

TEST_CASE("constants mix with jets from any context") {
    auto c = chart(1, 1);
    ChartPoint u(Eigen::Vector2d(1.5, -0.5));
    auto seeds = Jet::seed(u, 3);
    Jet j = 2.0 * seeds[0] + Jet(1.0) - seeds[1] * 0.5;
    CHECK(j.value() == doctest::Approx(2.0 * 1.5 + 1.0 + 0.25));
    CHECK(j.partial(mi({1, 0})) == doctest::Approx(2.0));
    CHECK(j.partial(mi({0, 1})) == doctest::Approx(-0.5));
}
