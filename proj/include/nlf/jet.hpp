#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "nlf/chart.hpp"
#include "nlf/errors.hpp"

namespace nlf {

using MultiIndex = std::array<std::uint8_t, ChartSpec::kMaxDim>;

// Shared index tables for truncated multivariate Taylor arithmetic in a fixed
// number of variables. Tables always go up to order kMaxOrder; individual jets
// carry their own (smaller) truncation order. Contexts are immutable once
// built and shared between threads.
class JetContext {
public:
    static constexpr int kMaxOrder = 4;

    static const JetContext& get(int nvars) {
        static std::mutex mu;
        static std::array<std::unique_ptr<JetContext>, ChartSpec::kMaxDim + 1> cache;
        if (nvars < 1 || nvars > ChartSpec::kMaxDim)
            throw DimensionTooLarge("jet arithmetic supports 1.." +
                                    std::to_string(ChartSpec::kMaxDim) + " variables");
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[static_cast<std::size_t>(nvars)];
        if (!slot) slot.reset(new JetContext(nvars));
        return *slot;
    }

    int nvars() const noexcept { return nvars_; }
    int size(int order) const { return size_by_order_.at(static_cast<std::size_t>(order)); }
    int degree(int k) const { return degree_[static_cast<std::size_t>(k)]; }
    const MultiIndex& midx(int k) const { return midx_[static_cast<std::size_t>(k)]; }

    // Position of a multi-index, or -1 if its degree exceeds kMaxOrder.
    int find(const MultiIndex& a) const {
        auto it = rank_.find(pack(a));
        return it == rank_.end() ? -1 : it->second;
    }

    // Index of midx(k) + e_v, or -1 when that exceeds kMaxOrder.
    int shifted(int k, int v) const { return shift_[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)]; }

    const std::vector<std::pair<int, int>>& products_into(int k) const {
        return mul_[static_cast<std::size_t>(k)];
    }

    static double factorial(int k) {
        static const double table[] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
        return table[k];
    }

private:
    explicit JetContext(int nvars) : nvars_(nvars) {
        // Multi-indices in graded order; within a degree the order is the
        // generation order (stable, deterministic).
        size_by_order_.assign(kMaxOrder + 1, 0);
        MultiIndex zero{};
        std::vector<MultiIndex> current{zero};
        append(zero);
        size_by_order_[0] = 1;
        for (int d = 1; d <= kMaxOrder; ++d) {
            std::vector<MultiIndex> next;
            for (const auto& a : current) {
                // Raise only at or after the last nonzero position to avoid duplicates.
                int first = 0;
                for (int v = nvars_ - 1; v >= 0; --v)
                    if (a[static_cast<std::size_t>(v)] != 0) { first = v; break; }
                for (int v = first; v < nvars_; ++v) {
                    MultiIndex b = a;
                    ++b[static_cast<std::size_t>(v)];
                    next.push_back(b);
                    append(b);
                }
            }
            size_by_order_[static_cast<std::size_t>(d)] = static_cast<int>(midx_.size());
            current = std::move(next);
        }

        const int total = static_cast<int>(midx_.size());
        for (int v = 0; v < nvars_; ++v) {
            shift_.emplace_back(static_cast<std::size_t>(total), -1);
            for (int k = 0; k < total; ++k) {
                MultiIndex b = midx_[static_cast<std::size_t>(k)];
                ++b[static_cast<std::size_t>(v)];
                shift_[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)] = find(b);
            }
        }

        mul_.resize(static_cast<std::size_t>(total));
        for (int i = 0; i < total; ++i) {
            for (int j = 0; j < total; ++j) {
                if (degree_[static_cast<std::size_t>(i)] + degree_[static_cast<std::size_t>(j)] > kMaxOrder)
                    continue;
                MultiIndex s{};
                for (int v = 0; v < nvars_; ++v)
                    s[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(
                        midx_[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] +
                        midx_[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)]);
                mul_[static_cast<std::size_t>(find(s))].emplace_back(i, j);
            }
        }
    }

    static std::uint64_t pack(const MultiIndex& a) {
        std::uint64_t key = 0;
        for (std::size_t v = 0; v < a.size(); ++v) key |= std::uint64_t(a[v] & 0x7) << (3 * v);
        return key;
    }

    void append(const MultiIndex& a) {
        int d = 0;
        for (int v = 0; v < nvars_; ++v) d += a[static_cast<std::size_t>(v)];
        rank_.emplace(pack(a), static_cast<int>(midx_.size()));
        midx_.push_back(a);
        degree_.push_back(d);
    }

    int nvars_;
    std::vector<MultiIndex> midx_;
    std::vector<int> degree_;
    std::vector<int> size_by_order_;
    std::unordered_map<std::uint64_t, int> rank_;
    std::vector<std::vector<int>> shift_;                 // [v][k]
    std::vector<std::vector<std::pair<int, int>>> mul_;   // [k] -> (i, j) pairs
};

// Truncated Taylor jet: coefficients c[k] = (d^alpha f)(u0) / alpha! for all
// multi-indices alpha of total degree <= order. A jet without a context is a
// plain constant; mixed arithmetic promotes constants on demand. Immutable in
// spirit: all operations return new values.
class Jet {
public:
    static constexpr int kConstOrder = 1 << 20;

    Jet() : ctx_(nullptr), ord_(kConstOrder), c_(Eigen::VectorXd::Zero(1)) {}
    /* implicit */ Jet(double v) : ctx_(nullptr), ord_(kConstOrder), c_(Eigen::VectorXd::Constant(1, v)) {}

    static Jet constant(double v) { return Jet(v); }

    static Jet variable(const JetContext& ctx, int order, int var, double value) {
        check_order(order);
        Jet j(ctx, order);
        j.c_(0) = value;
        if (order >= 1) {
            MultiIndex e{};
            e[static_cast<std::size_t>(var)] = 1;
            j.c_(ctx.find(e)) = 1.0;
        }
        return j;
    }

    // Seeds one jet per coordinate of u, all sharing the base point and order.
    static std::vector<Jet> seed(const ChartPoint& u, int order) {
        check_order(order);
        const JetContext& ctx = JetContext::get(u.dim());
        std::vector<Jet> out;
        out.reserve(static_cast<std::size_t>(u.dim()));
        for (int v = 0; v < u.dim(); ++v) out.push_back(variable(ctx, order, v, u[v]));
        return out;
    }

    bool is_constant() const noexcept { return ctx_ == nullptr; }
    int order() const noexcept { return ord_; }
    const JetContext* context() const noexcept { return ctx_; }
    double value() const { return c_(0); }
    const Eigen::VectorXd& coefficients() const noexcept { return c_; }

    // Taylor coefficient of a multi-index (0 when outside truncation).
    double coefficient(const MultiIndex& alpha) const {
        if (is_constant()) {
            for (auto a : alpha)
                if (a != 0) return 0.0;
            return value();
        }
        int k = ctx_->find(alpha);
        if (k < 0 || k >= c_.size()) return 0.0;
        return c_(k);
    }

    // True partial derivative: alpha! times the Taylor coefficient.
    double partial(const MultiIndex& alpha) const {
        double scale = 1.0;
        int total = 0;
        for (auto a : alpha) {
            scale *= JetContext::factorial(a);
            total += a;
        }
        if (!is_constant() && total > ord_)
            throw DomainError("requested partial exceeds jet truncation order");
        return scale * coefficient(alpha);
    }

    // d/dv as a jet of one order less.
    Jet derivative(int v) const {
        if (is_constant()) return Jet(0.0);
        if (ord_ == 0) throw DomainError("cannot differentiate an order-0 jet");
        Jet out(*ctx_, ord_ - 1);
        for (int k = 0; k < out.c_.size(); ++k) {
            int src = ctx_->shifted(k, v);
            out.c_(k) = c_(src) * (ctx_->midx(src)[static_cast<std::size_t>(v)]);
        }
        return out;
    }

    Jet truncated(int order) const {
        if (is_constant()) return *this;
        if (order >= ord_) return *this;
        Jet out(*ctx_, order);
        out.c_ = c_.head(out.c_.size());
        return out;
    }

    friend Jet operator-(const Jet& a) {
        Jet out = a;
        out.c_ = -out.c_;
        return out;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        if (a.is_constant() && b.is_constant()) return Jet(a.value() + b.value());
        if (a.is_constant()) { Jet out = b.truncated(b.ord_); out.c_(0) += a.value(); return out; }
        if (b.is_constant()) { Jet out = a.truncated(a.ord_); out.c_(0) += b.value(); return out; }
        require_same_context(a, b);
        const Jet& lo = a.ord_ <= b.ord_ ? a : b;
        const Jet& hi = a.ord_ <= b.ord_ ? b : a;
        Jet out = lo;
        out.c_ += hi.c_.head(out.c_.size());
        return out;
    }

    friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        if (a.is_constant() && b.is_constant()) return Jet(a.value() * b.value());
        if (a.is_constant()) { Jet out = b; out.c_ *= a.value(); return out; }
        if (b.is_constant()) { Jet out = a; out.c_ *= b.value(); return out; }
        require_same_context(a, b);
        Jet out(*a.ctx_, std::min(a.ord_, b.ord_));
        for (int k = 0; k < out.c_.size(); ++k) {
            double acc = 0.0;
            for (const auto& [i, j] : a.ctx_->products_into(k)) acc += a.c_(i) * b.c_(j);
            out.c_(k) = acc;
        }
        return out;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

    Jet& operator+=(const Jet& other) { *this = *this + other; return *this; }
    Jet& operator-=(const Jet& other) { *this = *this - other; return *this; }
    Jet& operator*=(const Jet& other) { *this = *this * other; return *this; }

    // Truncated composition f(u) from the outer derivatives f^(k)(u0), k=0..ord.
    // Exact to truncation order for analytic f.
    static Jet compose(const Jet& u, const std::array<double, JetContext::kMaxOrder + 1>& derivs) {
        if (u.is_constant()) return Jet(derivs[0]);
        const int ord = u.ord_;
        Jet w = u;
        w.c_(0) = 0.0;  // the increment: no constant term
        Jet acc = Jet(derivs[0]);
        Jet wp = Jet(1.0);
        for (int k = 1; k <= ord; ++k) {
            wp = wp * w;
            acc = acc + (derivs[static_cast<std::size_t>(k)] / JetContext::factorial(k)) * wp;
        }
        // Promote in case ord == 0 kept acc constant.
        return acc.is_constant() ? promoted(acc, u) : acc;
    }

    friend Jet reciprocal(const Jet& b) {
        double v = b.value();
        if (v == 0.0) throw DomainError("division by a jet with zero value part");
        if (b.is_constant()) return Jet(1.0 / v);
        std::array<double, JetContext::kMaxOrder + 1> d{};
        double p = 1.0 / v;
        for (int k = 0; k <= JetContext::kMaxOrder; ++k) {
            d[static_cast<std::size_t>(k)] = JetContext::factorial(k) * p * ((k % 2) ? -1.0 : 1.0);
            p /= v;
        }
        return compose(b, d);
    }

    friend Jet exp(const Jet& a) {
        double e = std::exp(a.value());
        return compose(a, {e, e, e, e, e});
    }

    friend Jet log(const Jet& a) {
        double v = a.value();
        if (v <= 0.0) throw DomainError("log of a jet with non-positive value part");
        return compose(a, {std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v),
                           -6.0 / (v * v * v * v)});
    }

    friend Jet sqrt(const Jet& a) {
        double v = a.value();
        if (v <= 0.0) throw DomainError("sqrt of a jet with non-positive value part");
        double r = std::sqrt(v);
        return compose(a, {r, 0.5 * r / v, -0.25 * r / (v * v), 0.375 * r / (v * v * v),
                           -0.9375 * r / (v * v * v * v)});
    }

    friend Jet sin(const Jet& a) {
        double s = std::sin(a.value()), c = std::cos(a.value());
        return compose(a, {s, c, -s, -c, s});
    }

    friend Jet cos(const Jet& a) {
        double s = std::sin(a.value()), c = std::cos(a.value());
        return compose(a, {c, -s, -c, s, c});
    }

    // Integer powers work for any base; fractional exponents need a positive
    // value part so the jet stays real.
    friend Jet pow(const Jet& a, long long num, long long den) {
        if (den == 0) throw DomainError("power with zero denominator");
        if (den < 0) { den = -den; num = -num; }
        if (den == 1) return ipow(a, num);
        double v = a.value();
        if (v <= 0.0)
            throw DomainError("fractional power of a jet with non-positive value part");
        double r = static_cast<double>(num) / static_cast<double>(den);
        std::array<double, JetContext::kMaxOrder + 1> d{};
        double factor = std::pow(v, r);  // builds r(r-1)...(r-k+1) v^{r-k}
        double expo = r;
        d[0] = factor;
        for (int k = 1; k <= JetContext::kMaxOrder; ++k) {
            factor *= expo / v;
            expo -= 1.0;
            d[static_cast<std::size_t>(k)] = factor;
        }
        return compose(a, d);
    }

private:
    Jet(const JetContext& ctx, int order)
        : ctx_(&ctx), ord_(order), c_(Eigen::VectorXd::Zero(ctx.size(order))) {}

    static void check_order(int order) {
        if (order < 0 || order > JetContext::kMaxOrder)
            throw DomainError("jet order must be between 0 and " +
                              std::to_string(JetContext::kMaxOrder));
    }

    static void require_same_context(const Jet& a, const Jet& b) {
        if (a.ctx_ != b.ctx_)
            throw DomainError("jets from different contexts cannot be combined");
    }

    static Jet promoted(const Jet& c, const Jet& like) {
        Jet out(*like.ctx_, like.ord_);
        out.c_(0) = c.value();
        return out;
    }

    static Jet ipow(const Jet& a, long long p) {
        if (p == 0) return Jet(1.0);
        bool invert = p < 0;
        unsigned long long e = invert ? static_cast<unsigned long long>(-p)
                                      : static_cast<unsigned long long>(p);
        Jet base = a;
        Jet acc = Jet(1.0);
        while (e) {
            if (e & 1ULL) acc = acc * base;
            base = base * base;
            e >>= 1ULL;
        }
        return invert ? reciprocal(acc) : acc;
    }

    const JetContext* ctx_;
    int ord_;
    Eigen::VectorXd c_;
};

inline Jet operator*(double s, const Jet& a) { return Jet(s) * a; }
inline Jet operator*(const Jet& a, double s) { return a * Jet(s); }
inline Jet operator+(double s, const Jet& a) { return Jet(s) + a; }
inline Jet operator+(const Jet& a, double s) { return a + Jet(s); }
inline Jet operator-(double s, const Jet& a) { return Jet(s) - a; }
inline Jet operator-(const Jet& a, double s) { return a - Jet(s); }
inline Jet operator/(double s, const Jet& a) { return Jet(s) / a; }
inline Jet operator/(const Jet& a, double s) { return a / Jet(s); }

} // namespace nlf
