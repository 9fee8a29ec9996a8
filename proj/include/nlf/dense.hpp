#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nlf/errors.hpp"
#include "nlf/jet.hpp"

namespace nlf {

// Small dense containers generic over the scalar (double for reports, Jet for
// the differentiation pipeline). Row-major, desk-scale sizes.
template <class T>
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), v_(static_cast<std::size_t>(rows * cols)) {}

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    T& operator()(int r, int c) { return v_[static_cast<std::size_t>(r * cols_ + c)]; }
    const T& operator()(int r, int c) const { return v_[static_cast<std::size_t>(r * cols_ + c)]; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> v_;
};

template <class T>
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int d0, int d1, int d2)
        : d0_(d0), d1_(d1), d2_(d2), v_(static_cast<std::size_t>(d0 * d1 * d2)) {}

    int dim0() const noexcept { return d0_; }
    int dim1() const noexcept { return d1_; }
    int dim2() const noexcept { return d2_; }
    T& operator()(int i, int j, int k) {
        return v_[static_cast<std::size_t>((i * d1_ + j) * d2_ + k)];
    }
    const T& operator()(int i, int j, int k) const {
        return v_[static_cast<std::size_t>((i * d1_ + j) * d2_ + k)];
    }
    const std::vector<T>& data() const noexcept { return v_; }

private:
    int d0_ = 0, d1_ = 0, d2_ = 0;
    std::vector<T> v_;
};

template <class T>
class Tensor4 {
public:
    Tensor4() = default;
    Tensor4(int d0, int d1, int d2, int d3)
        : d0_(d0), d1_(d1), d2_(d2), d3_(d3),
          v_(static_cast<std::size_t>(d0 * d1 * d2 * d3)) {}

    int dim0() const noexcept { return d0_; }
    int dim1() const noexcept { return d1_; }
    int dim2() const noexcept { return d2_; }
    int dim3() const noexcept { return d3_; }
    T& operator()(int i, int j, int k, int l) {
        return v_[static_cast<std::size_t>(((i * d1_ + j) * d2_ + k) * d3_ + l)];
    }
    const T& operator()(int i, int j, int k, int l) const {
        return v_[static_cast<std::size_t>(((i * d1_ + j) * d2_ + k) * d3_ + l)];
    }
    const std::vector<T>& data() const noexcept { return v_; }

private:
    int d0_ = 0, d1_ = 0, d2_ = 0, d3_ = 0;
    std::vector<T> v_;
};

using JetMatrix = Mat<Jet>;

// Gauss-Jordan inverse with value-part pivoting. Jets form a commutative ring
// in which an element is invertible iff its value part is nonzero.
inline JetMatrix inverse(const JetMatrix& a) {
    const int n = a.rows();
    if (n != a.cols()) throw DimensionMismatch("inverse needs a square matrix");
    JetMatrix m = a;
    JetMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = Jet(i == j ? 1.0 : 0.0);

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(m(col, col).value());
        for (int r = col + 1; r < n; ++r) {
            double cand = std::abs(m(r, col).value());
            if (cand > best) { best = cand; pivot = r; }
        }
        if (!(best > 0.0)) throw DomainError("singular matrix in jet inverse");
        if (pivot != col)
            for (int c = 0; c < n; ++c) {
                std::swap(m(pivot, c), m(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        Jet scale = reciprocal(m(col, col));
        for (int c = 0; c < n; ++c) {
            m(col, c) = m(col, c) * scale;
            inv(col, c) = inv(col, c) * scale;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            Jet factor = m(r, col);
            if (factor.is_constant() && factor.value() == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                m(r, c) = m(r, c) - factor * m(col, c);
                inv(r, c) = inv(r, c) - factor * inv(col, c);
            }
        }
    }
    return inv;
}

inline Eigen::MatrixXd values(const JetMatrix& a) {
    Eigen::MatrixXd out(a.rows(), a.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) out(r, c) = a(r, c).value();
    return out;
}

} // namespace nlf
