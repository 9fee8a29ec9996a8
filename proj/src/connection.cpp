#include "nlf/connection.hpp"

namespace nlf {
namespace {

// Christoffel-style h-family of (g, N): 1/2 g^{ir} (e_k g_jr + e_j g_kr - e_r g_jk).
Tensor3<Jet> h_christoffel(const JetMatrix& g, const JetMatrix& ginv, const JetMatrix& njets,
                           int n) {
    Tensor3<Jet> ek_g(n, n, n);  // (j, r, k) -> e_k g_jr
    for (int j = 0; j < n; ++j)
        for (int r = j; r < n; ++r)
            for (int k = 0; k < n; ++k) {
                Jet v = n_elongated(g(j, r), njets, n, k);
                ek_g(j, r, k) = v;
                if (r != j) ek_g(r, j, k) = v;
            }
    Tensor3<Jet> L(n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                Jet acc = Jet(0.0);
                for (int r = 0; r < n; ++r)
                    acc += ginv(i, r) * (ek_g(j, r, k) + ek_g(k, r, j) - ek_g(j, k, r));
                acc = 0.5 * acc;
                L(i, j, k) = acc;
                if (k != j) L(i, k, j) = acc;
            }
    return L;
}

// v-Christoffels of h: 1/2 h^{ad} (d_c h_bd + d_b h_cd - d_d h_bc).
Tensor3<Jet> v_christoffel(const JetMatrix& h, const JetMatrix& hinv, int n, int m) {
    Tensor3<Jet> dy_h(m, m, m);  // (b, d, c) -> d h_bd / d y^c
    for (int b = 0; b < m; ++b)
        for (int d = b; d < m; ++d)
            for (int c = 0; c < m; ++c) {
                Jet v = h(b, d).derivative(n + c);
                dy_h(b, d, c) = v;
                if (d != b) dy_h(d, b, c) = v;
            }
    Tensor3<Jet> C(m, m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = b; c < m; ++c) {
                Jet acc = Jet(0.0);
                for (int d = 0; d < m; ++d)
                    acc += hinv(a, d) * (dy_h(b, d, c) + dy_h(c, d, b) - dy_h(b, c, d));
                acc = 0.5 * acc;
                C(a, b, c) = acc;
                if (c != b) C(a, c, b) = acc;
            }
    return C;
}

ConnJets canonical_families(const DMetric& dm, const ChartPoint& u, int order) {
    const int n = dm.n();
    const int m = dm.m();
    JetMatrix g = dm.g_jets(u, order + 1);
    JetMatrix h = dm.h_jets(u, order + 1);
    JetMatrix N = dm.n_jets(u, order + 1);
    JetMatrix ginv = inverse(g);
    JetMatrix hinv = inverse(h);

    ConnJets out;
    out.L_h = h_christoffel(g, ginv, N, n);

    // L^a_bk = dN^a_k/dy^b + 1/2 h^{ac} (e_k h_bc - dN^d_k/dy^b h_dc - dN^d_k/dy^c h_db)
    Tensor3<Jet> dyN(m, n, m);  // (d, k, b) -> dN^d_k / dy^b
    for (int d = 0; d < m; ++d)
        for (int k = 0; k < n; ++k)
            for (int b = 0; b < m; ++b) dyN(d, k, b) = N(d, k).derivative(n + b);
    out.L_v = Tensor3<Jet>(m, m, n);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int k = 0; k < n; ++k) {
                Jet acc = dyN(a, k, b);
                Jet inner = Jet(0.0);
                for (int c = 0; c < m; ++c) {
                    Jet term = n_elongated(h(b, c), N, n, k);
                    for (int d = 0; d < m; ++d)
                        term -= dyN(d, k, b) * h(d, c) + dyN(d, k, c) * h(d, b);
                    inner += hinv(a, c) * term;
                }
                out.L_v(a, b, k) = acc + 0.5 * inner;
            }

    // C^i_jc = 1/2 g^{ik} d g_jk / d y^c
    out.C_h = Tensor3<Jet>(n, n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int c = 0; c < m; ++c) {
                Jet acc = Jet(0.0);
                for (int k = 0; k < n; ++k) acc += ginv(i, k) * g(j, k).derivative(n + c);
                out.C_h(i, j, c) = 0.5 * acc;
            }

    out.C_v = v_christoffel(h, hinv, n, m);
    return out;
}

ConnJets tangent_families(const DMetric& dm, const ChartPoint& u, int order) {
    const int n = dm.n();
    JetMatrix g = dm.g_jets(u, order + 1);
    JetMatrix N = dm.n_jets(u, order);
    JetMatrix ginv = inverse(g);

    ConnJets out;
    out.L_h = h_christoffel(g, ginv, N, n);
    out.C_v = v_christoffel(g, ginv, n, n);
    out.L_v = out.L_h;
    out.C_h = out.C_v;
    return out;
}

void require_tangent_model(const DMetric& dm, const char* what) {
    if (dm.n() != dm.m())
        throw DimensionMismatch(std::string(what) + " needs the tangent model n == m");
}

int tangent_max_order(const DMetric& dm) {
    // Families need g at order+1 and N at order.
    return std::min(dm.max_block_order() - 1, dm.max_n_order());
}

} // namespace

ConnValues values_of(const ConnJets& jets) {
    auto conv = [](const Tensor3<Jet>& t) {
        Tensor3<double> out(t.dim0(), t.dim1(), t.dim2());
        for (int i = 0; i < t.dim0(); ++i)
            for (int j = 0; j < t.dim1(); ++j)
                for (int k = 0; k < t.dim2(); ++k) out(i, j, k) = t(i, j, k).value();
        return out;
    };
    return ConnValues{conv(jets.L_h), conv(jets.L_v), conv(jets.C_h), conv(jets.C_v)};
}

DeformationTensor DeformationTensor::zero(int n, int m) {
    return DeformationTensor(n, m, JetContext::kMaxOrder, [n, m](const ChartPoint&, int) {
        return ConnJets::zeros(n, m);
    });
}

DeformationTensor DeformationTensor::constant(int n, int m, ConnValues values) {
    auto v = std::make_shared<ConnValues>(std::move(values));
    return DeformationTensor(n, m, JetContext::kMaxOrder,
                             [n, m, v](const ChartPoint&, int) {
                                 ConnJets out = ConnJets::zeros(n, m);
                                 auto fill = [](Tensor3<Jet>& dst, const Tensor3<double>& src) {
                                     for (int i = 0; i < src.dim0(); ++i)
                                         for (int j = 0; j < src.dim1(); ++j)
                                             for (int k = 0; k < src.dim2(); ++k)
                                                 dst(i, j, k) = Jet(src(i, j, k));
                                 };
                                 fill(out.L_h, v->L_h);
                                 fill(out.L_v, v->L_v);
                                 fill(out.C_h, v->C_h);
                                 fill(out.C_v, v->C_v);
                                 return out;
                             });
}

DeformationTensor DeformationTensor::from_expressions(std::shared_ptr<const ChartSpec> chart,
                                                      Tensor3<Expression> L_h,
                                                      Tensor3<Expression> L_v,
                                                      Tensor3<Expression> C_h,
                                                      Tensor3<Expression> C_v) {
    const int n = chart->n();
    const int m = chart->m();
    auto hold = std::make_shared<std::array<Tensor3<Expression>, 4>>(
        std::array<Tensor3<Expression>, 4>{std::move(L_h), std::move(L_v), std::move(C_h),
                                           std::move(C_v)});
    return DeformationTensor(
        n, m, JetContext::kMaxOrder, [hold, n, m](const ChartPoint& u, int order) {
            auto seeds = Jet::seed(u, order);
            ConnJets out = ConnJets::zeros(n, m);
            auto fill = [&](Tensor3<Jet>& dst, const Tensor3<Expression>& src) {
                for (int i = 0; i < src.dim0(); ++i)
                    for (int j = 0; j < src.dim1(); ++j)
                        for (int k = 0; k < src.dim2(); ++k)
                            if (!src(i, j, k).empty()) dst(i, j, k) = src(i, j, k).eval(seeds);
            };
            fill(out.L_h, (*hold)[0]);
            fill(out.L_v, (*hold)[1]);
            fill(out.C_h, (*hold)[2]);
            fill(out.C_v, (*hold)[3]);
            return out;
        });
}

DeformationTensor DeformationTensor::difference(const DConnection& a, const DConnection& b) {
    if (a.n() != b.n() || a.m() != b.m())
        throw DimensionMismatch("connection difference needs matching dimensions");
    DConnection lhs = a;
    DConnection rhs = b;
    return DeformationTensor(
        a.n(), a.m(), std::min(a.max_order(), b.max_order()),
        [lhs, rhs](const ChartPoint& u, int order) {
            ConnJets p = lhs.families_jets(u, order);
            ConnJets q = rhs.families_jets(u, order);
            auto sub = [](Tensor3<Jet>& dst, const Tensor3<Jet>& src) {
                for (int i = 0; i < dst.dim0(); ++i)
                    for (int j = 0; j < dst.dim1(); ++j)
                        for (int k = 0; k < dst.dim2(); ++k) dst(i, j, k) -= src(i, j, k);
            };
            sub(p.L_h, q.L_h);
            sub(p.L_v, q.L_v);
            sub(p.C_h, q.C_h);
            sub(p.C_v, q.C_v);
            return p;
        });
}

ConnJets DeformationTensor::jets(const ChartPoint& u, int order) const {
    if (order > max_order_)
        throw DomainError("deformation tensor jets available up to order " +
                          std::to_string(max_order_));
    return fn_(u, order);
}

DConnection DConnection::canonical(std::shared_ptr<const DMetric> dm) {
    if (dm->lagrangian_backed()) return tangent_canonical(std::move(dm));
    return canonical_general(std::move(dm));
}

DConnection DConnection::canonical_general(std::shared_ptr<const DMetric> dm) {
    const DMetric& ref = *dm;
    int max_order = std::min(ref.max_block_order(), ref.max_n_order()) - 1;
    auto held = dm;
    return DConnection(ConnectionKind::canonical, ref.n(), ref.m(), max_order, dm,
                       [held](const ChartPoint& u, int order) {
                           return canonical_families(*held, u, order);
                       });
}

DConnection DConnection::tangent_canonical(std::shared_ptr<const DMetric> dm) {
    require_tangent_model(*dm, "tangent canonical d-connection");
    auto held = dm;
    return DConnection(ConnectionKind::canonical, dm->n(), dm->m(), tangent_max_order(*dm), dm,
                       [held](const ChartPoint& u, int order) {
                           return tangent_families(*held, u, order);
                       });
}

DConnection DConnection::chern(std::shared_ptr<const DMetric> dm) {
    require_tangent_model(*dm, "Chern d-connection");
    auto held = dm;
    const int n = dm->n();
    return DConnection(ConnectionKind::chern, n, n, tangent_max_order(*dm), dm,
                       [held, n](const ChartPoint& u, int order) {
                           JetMatrix g = held->g_jets(u, order + 1);
                           JetMatrix N = held->n_jets(u, order);
                           ConnJets out = ConnJets::zeros(n, n);
                           out.L_h = h_christoffel(g, inverse(g), N, n);
                           out.L_v = out.L_h;
                           return out;
                       });
}

DConnection DConnection::berwald(std::shared_ptr<const DMetric> dm) {
    require_tangent_model(*dm, "Berwald d-connection");
    auto held = dm;
    const int n = dm->n();
    return DConnection(ConnectionKind::berwald, n, n, dm->max_n_order() - 1, dm,
                       [held, n](const ChartPoint& u, int order) {
                           JetMatrix N = held->n_jets(u, order + 1);
                           ConnJets out = ConnJets::zeros(n, n);
                           for (int i = 0; i < n; ++i)
                               for (int j = 0; j < n; ++j)
                                   for (int k = 0; k < n; ++k)
                                       out.L_h(i, j, k) = N(i, k).derivative(n + j);
                           out.L_v = out.L_h;
                           return out;
                       });
}

DConnection DConnection::deform(const DeformationTensor& P) const {
    if (P.n() != n_ || P.m() != m_)
        throw DimensionMismatch("deformation tensor does not match connection dimensions");
    Fn base = fn_;
    DeformationTensor defo = P;
    const int n = n_, m = m_;
    auto sum = [base, defo, n, m](const ChartPoint& u, int order) {
        ConnJets a = base(u, order);
        ConnJets p = defo.jets(u, order);
        auto add = [](Tensor3<Jet>& dst, const Tensor3<Jet>& src) {
            for (int i = 0; i < dst.dim0(); ++i)
                for (int j = 0; j < dst.dim1(); ++j)
                    for (int k = 0; k < dst.dim2(); ++k) dst(i, j, k) += src(i, j, k);
        };
        add(a.L_h, p.L_h);
        add(a.L_v, p.L_v);
        add(a.C_h, p.C_h);
        add(a.C_v, p.C_v);
        return a;
    };
    return DConnection(ConnectionKind::deformed, n_, m_, std::min(max_order_, P.max_order()),
                       metric_, sum);
}

ConnJets DConnection::families_jets(const ChartPoint& u, int order) const {
    if (order > max_order_)
        throw DomainError("connection families available up to jet order " +
                          std::to_string(max_order_) + ", requested " + std::to_string(order) +
                          " (Lagrangian-backed metrics cap the derivative budget)");
    return fn_(u, order);
}

ConnValues DConnection::families(const ChartPoint& u) const {
    return values_of(families_jets(u, 0));
}

TorsionTensor dtorsion(const DConnection& conn, const NConnection& N, const ChartPoint& u) {
    const int n = conn.n();
    const int m = conn.m();
    ConnValues f = conn.families(u);
    JetMatrix njets = N.jets(u, 1);
    Nonholonomy nh = nonholonomy(N, u);

    TorsionTensor t{Tensor3<double>(n, n, n), Tensor3<double>(n, n, m), Tensor3<double>(m, n, n),
                    Tensor3<double>(m, m, n), Tensor3<double>(m, m, m)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) t.T_hhh(i, j, k) = f.L_h(i, j, k) - f.L_h(i, k, j);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < m; ++a) t.T_hhv(i, j, a) = f.C_h(i, j, a);
    for (int a = 0; a < m; ++a)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) t.T_vhh(a, j, i) = nh.Omega(a, j, i);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int i = 0; i < n; ++i)
                t.T_vvh(a, b, i) = njets(a, i).derivative(n + b).value() - f.L_v(a, b, i);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) t.T_vvv(a, b, c) = f.C_v(a, b, c) - f.C_v(a, c, b);
    return t;
}

double metricity_defect(const DConnection& conn, const DMetric& dm, const ChartPoint& u) {
    const int n = dm.n();
    const int m = dm.m();
    ConnValues f = conn.families(u);
    JetMatrix g = dm.g_jets(u, 1);
    JetMatrix h = dm.h_jets(u, 1);
    JetMatrix N = dm.n_jets(u, 0);

    auto ek = [&](const Jet& jet, int k) { return n_elongated(jet, N, n, k).value(); };

    double worst = 0.0;
    auto track = [&worst](double v) { worst = std::max(worst, std::abs(v)); };

    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = ek(g(i, j), k);
                for (int mm = 0; mm < n; ++mm)
                    acc -= f.L_h(mm, i, k) * g(mm, j).value() + f.L_h(mm, j, k) * g(i, mm).value();
                track(acc);
            }
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                double acc = ek(h(a, b), k);
                for (int c = 0; c < m; ++c)
                    acc -= f.L_v(c, a, k) * h(c, b).value() + f.L_v(c, b, k) * h(a, c).value();
                track(acc);
            }
    }
    for (int c = 0; c < m; ++c) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = g(i, j).derivative(n + c).value();
                for (int mm = 0; mm < n; ++mm)
                    acc -= f.C_h(mm, i, c) * g(mm, j).value() + f.C_h(mm, j, c) * g(i, mm).value();
                track(acc);
            }
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                double acc = h(a, b).derivative(n + c).value();
                for (int d = 0; d < m; ++d)
                    acc -= f.C_v(d, a, c) * h(d, b).value() + f.C_v(d, b, c) * h(a, d).value();
                track(acc);
            }
    }
    return worst;
}

} // namespace nlf
