#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "nlf/errors.hpp"

namespace nlf {

// A chart carries the h/v split: coordinates 0..n-1 are horizontal (x1..xn),
// coordinates n..n+m-1 are vertical (y1..ym).
class ChartSpec {
public:
    ChartSpec(int n, int m, bool positive_definite = true)
        : n_(n), m_(m), positive_definite_(positive_definite) {
        if (n < 1 || m < 1)
            throw InvalidInput("chart requires n >= 1 and m >= 1");
        if (n + m > kMaxDim)
            throw DimensionTooLarge("chart dimension n+m must be <= " + std::to_string(kMaxDim));
        names_.reserve(static_cast<std::size_t>(n + m));
        for (int i = 1; i <= n; ++i) names_.push_back("x" + std::to_string(i));
        for (int a = 1; a <= m; ++a) names_.push_back("y" + std::to_string(a));
    }

    static constexpr int kMaxDim = 8;

    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }
    int dim() const noexcept { return n_ + m_; }
    bool positive_definite() const noexcept { return positive_definite_; }

    const std::string& name(int coord) const { return names_.at(static_cast<std::size_t>(coord)); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    // -1 when the name is not a declared coordinate.
    int index_of(const std::string& name) const noexcept {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return -1;
    }

    bool is_horizontal(int coord) const noexcept { return coord < n_; }

    bool operator==(const ChartSpec& other) const noexcept {
        return n_ == other.n_ && m_ == other.m_ && names_ == other.names_;
    }

private:
    int n_;
    int m_;
    bool positive_definite_;
    std::vector<std::string> names_;
};

// A point u = (x, y) stored as one dense vector of length n+m.
struct ChartPoint {
    Eigen::VectorXd u;

    ChartPoint() = default;
    explicit ChartPoint(Eigen::VectorXd coords) : u(std::move(coords)) {}
    ChartPoint(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        u.resize(x.size() + y.size());
        u << x, y;
    }

    int dim() const noexcept { return static_cast<int>(u.size()); }
    double operator[](int i) const { return u(i); }

    Eigen::VectorXd x(const ChartSpec& chart) const { return u.head(chart.n()); }
    Eigen::VectorXd y(const ChartSpec& chart) const { return u.tail(chart.m()); }
};

} // namespace nlf
