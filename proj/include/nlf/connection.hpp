#pragma once

#include <functional>
#include <memory>

#include "nlf/dense.hpp"
#include "nlf/metric.hpp"

namespace nlf {

// The four coefficient families of a d-connection, generic over the scalar.
// Index layout (direction last, matching the covariant-derivative slots):
//   L_h(i, j, k):  L^i_{jk}   h-legs along h-directions
//   L_v(a, b, k):  L^a_{bk}   v-legs along h-directions
//   C_h(i, j, c):  C^i_{jc}   h-legs along v-directions
//   C_v(a, b, c):  C^a_{bc}   v-legs along v-directions
template <class T>
struct ConnFamilies {
    Tensor3<T> L_h;
    Tensor3<T> L_v;
    Tensor3<T> C_h;
    Tensor3<T> C_v;

    static ConnFamilies zeros(int n, int m) {
        return ConnFamilies{Tensor3<T>(n, n, n), Tensor3<T>(m, m, n), Tensor3<T>(n, n, m),
                            Tensor3<T>(m, m, m)};
    }
};

using ConnJets = ConnFamilies<Jet>;
using ConnValues = ConnFamilies<double>;

ConnValues values_of(const ConnJets& jets);

// N-elongated derivative e_k f = d_k f - N^a_k d_{y^a} f acting on a jet.
inline Jet n_elongated(const Jet& f, const JetMatrix& njets, int n, int k) {
    Jet acc = f.derivative(k);
    for (int a = 0; a < njets.rows(); ++a) acc -= njets(a, k) * f.derivative(n + a);
    return acc;
}

enum class ConnectionKind { canonical, chern, berwald, deformed };

// Deformation d-tensor P^alpha_{beta gamma} with the four-family layout,
// evaluable as jets so deformed connections stay differentiable.
class DeformationTensor {
public:
    using Fn = std::function<ConnJets(const ChartPoint&, int)>;

    DeformationTensor() = default;
    DeformationTensor(int n, int m, int max_order, Fn fn)
        : n_(n), m_(m), max_order_(max_order), fn_(std::move(fn)) {}

    static DeformationTensor zero(int n, int m);
    static DeformationTensor constant(int n, int m, ConnValues values);
    static DeformationTensor from_expressions(std::shared_ptr<const ChartSpec> chart,
                                              Tensor3<Expression> L_h, Tensor3<Expression> L_v,
                                              Tensor3<Expression> C_h, Tensor3<Expression> C_v);
    // P = a - b, evaluated family-wise as jets.
    static DeformationTensor difference(const class DConnection& a, const class DConnection& b);

    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }
    int max_order() const noexcept { return max_order_; }
    ConnJets jets(const ChartPoint& u, int order) const;

private:
    int n_ = 0;
    int m_ = 0;
    int max_order_ = 0;
    Fn fn_;
};

// A d-connection bound to its d-metric data. Immutable; family evaluation is
// pure. `max_order` reports how many derivative orders of the families are
// available (curvature needs 1).
class DConnection {
public:
    // Canonical d-connection from [g, h, N]: metric-compatible with vanishing
    // pure h- and v-torsion. Lagrangian-backed (Sasaki) metrics evaluate via
    // the tangent-model reduction, which yields identical coefficients and
    // one more derivative order within the jet budget.
    static DConnection canonical(std::shared_ptr<const DMetric> dm);

    // The generic four-family formulas, regardless of backing. Used to
    // cross-check the tangent-model reduction; limited to jet order 0 on
    // Lagrangian input.
    static DConnection canonical_general(std::shared_ptr<const DMetric> dm);

    // Tangent-model (n == m, Sasaki) reduction: the h-family formulas, with
    // the v-families mirroring them.
    static DConnection tangent_canonical(std::shared_ptr<const DMetric> dm);

    // Torsion-controlled nonmetric variants, tangent model only.
    static DConnection chern(std::shared_ptr<const DMetric> dm);
    static DConnection berwald(std::shared_ptr<const DMetric> dm);

    DConnection deform(const DeformationTensor& P) const;

    ConnectionKind kind() const noexcept { return kind_; }
    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }
    int max_order() const noexcept { return max_order_; }
    const std::shared_ptr<const DMetric>& metric() const noexcept { return metric_; }

    ConnJets families_jets(const ChartPoint& u, int order) const;
    ConnValues families(const ChartPoint& u) const;

private:
    using Fn = std::function<ConnJets(const ChartPoint&, int)>;
    DConnection(ConnectionKind kind, int n, int m, int max_order,
                std::shared_ptr<const DMetric> dm, Fn fn)
        : kind_(kind), n_(n), m_(m), max_order_(max_order), metric_(std::move(dm)),
          fn_(std::move(fn)) {}

    ConnectionKind kind_;
    int n_;
    int m_;
    int max_order_;
    std::shared_ptr<const DMetric> metric_;
    Fn fn_;
};

// Irreducible d-torsion components at a point.
struct TorsionTensor {
    Tensor3<double> T_hhh;  // T^i_{jk} = L^i_{[jk]}
    Tensor3<double> T_hhv;  // T^i_{ja} = C^i_{ja}
    Tensor3<double> T_vhh;  // T^a_{ji} = Omega^a_{ji}
    Tensor3<double> T_vvh;  // T^a_{bi} = dN^a_i/dy^b - L^a_{bi}
    Tensor3<double> T_vvv;  // T^a_{bc} = C^a_{[bc]}
};

TorsionTensor dtorsion(const DConnection& conn, const NConnection& N, const ChartPoint& u);

// Max |D_gamma g_{alpha beta}| over the block d-metric in the adapted frame.
double metricity_defect(const DConnection& conn, const DMetric& dm, const ChartPoint& u);

} // namespace nlf
