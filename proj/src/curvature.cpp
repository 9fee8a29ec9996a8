#include "nlf/curvature.hpp"

namespace nlf {
namespace {

// Point data shared by the block formulas: family values, their N-elongated
// h-derivatives and plain v-derivatives, N-curvature, and the mixed torsion.
struct PointData {
    int n, m;
    ConnValues f;
    Tensor4<double> ek_Lh, ea_Lh;  // (i,j,k | direction)
    Tensor4<double> ek_Lv, ea_Lv;
    Tensor4<double> ek_Ch, ea_Ch;
    Tensor4<double> ek_Cv, ea_Cv;
    Tensor3<double> Omega;  // (a, i, j)
    Tensor3<double> dyN;    // (b, k, a) = dN^b_k / dy^a
    Tensor3<double> T_mix;  // (b, k, a) = dyN(b,k,a) - L_v(b,a,k)
};

void differentiate(const Tensor3<Jet>& src, const JetMatrix& njets, int n, Tensor4<double>& dh,
                   Tensor4<double>& dv, int m) {
    dh = Tensor4<double>(src.dim0(), src.dim1(), src.dim2(), n);
    dv = Tensor4<double>(src.dim0(), src.dim1(), src.dim2(), m);
    for (int i = 0; i < src.dim0(); ++i)
        for (int j = 0; j < src.dim1(); ++j)
            for (int k = 0; k < src.dim2(); ++k) {
                const Jet& jet = src(i, j, k);
                for (int d = 0; d < n; ++d) dh(i, j, k, d) = n_elongated(jet, njets, n, d).value();
                for (int d = 0; d < m; ++d) dv(i, j, k, d) = jet.derivative(n + d).value();
            }
}

PointData collect(const DConnection& conn, const NConnection& N, const ChartPoint& u) {
    PointData p;
    p.n = conn.n();
    p.m = conn.m();
    ConnJets fam = conn.families_jets(u, 1);
    JetMatrix njets = N.jets(u, 1);

    p.f = values_of(fam);
    differentiate(fam.L_h, njets, p.n, p.ek_Lh, p.ea_Lh, p.m);
    differentiate(fam.L_v, njets, p.n, p.ek_Lv, p.ea_Lv, p.m);
    differentiate(fam.C_h, njets, p.n, p.ek_Ch, p.ea_Ch, p.m);
    differentiate(fam.C_v, njets, p.n, p.ek_Cv, p.ea_Cv, p.m);

    Tensor3<Jet> om = nonholonomy_jets(njets, p.n, p.m);
    p.Omega = Tensor3<double>(p.m, p.n, p.n);
    for (int a = 0; a < p.m; ++a)
        for (int i = 0; i < p.n; ++i)
            for (int j = 0; j < p.n; ++j) p.Omega(a, i, j) = om(a, i, j).value();

    p.dyN = Tensor3<double>(p.m, p.n, p.m);
    p.T_mix = Tensor3<double>(p.m, p.n, p.m);
    for (int b = 0; b < p.m; ++b)
        for (int k = 0; k < p.n; ++k)
            for (int a = 0; a < p.m; ++a) {
                p.dyN(b, k, a) = njets(b, k).derivative(p.n + a).value();
                p.T_mix(b, k, a) = p.dyN(b, k, a) - p.f.L_v(b, a, k);
            }
    return p;
}

Tensor4<double> block_hhhh(const PointData& p) {
    const int n = p.n, m = p.m;
    Tensor4<double> R(n, n, n, n);
    for (int i = 0; i < n; ++i)
        for (int h = 0; h < n; ++h)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double acc = p.ek_Lh(i, h, j, k) - p.ek_Lh(i, h, k, j);
                    for (int mm = 0; mm < n; ++mm)
                        acc += p.f.L_h(mm, h, j) * p.f.L_h(i, mm, k) -
                               p.f.L_h(mm, h, k) * p.f.L_h(i, mm, j);
                    for (int a = 0; a < m; ++a) acc -= p.f.C_h(i, h, a) * p.Omega(a, k, j);
                    R(i, h, j, k) = acc;
                }
    return R;
}

Tensor4<double> block_vvhh(const PointData& p) {
    const int n = p.n, m = p.m;
    Tensor4<double> R(m, m, n, n);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double acc = p.ek_Lv(a, b, j, k) - p.ek_Lv(a, b, k, j);
                    for (int c = 0; c < m; ++c)
                        acc += p.f.L_v(c, b, j) * p.f.L_v(a, c, k) -
                               p.f.L_v(c, b, k) * p.f.L_v(a, c, j);
                    for (int c = 0; c < m; ++c) acc -= p.f.C_v(a, b, c) * p.Omega(c, k, j);
                    R(a, b, j, k) = acc;
                }
    return R;
}

Tensor4<double> block_hhhv(const PointData& p) {
    const int n = p.n, m = p.m;
    Tensor4<double> R(n, n, n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int a = 0; a < m; ++a) {
                    // D_k C^i_{ja}: h-covariant derivative acting on all three
                    // indices, with L_v on the v-index.
                    double DkC = p.ek_Ch(i, j, a, k);
                    for (int mm = 0; mm < n; ++mm)
                        DkC += p.f.L_h(i, mm, k) * p.f.C_h(mm, j, a) -
                               p.f.L_h(mm, j, k) * p.f.C_h(i, mm, a);
                    for (int b = 0; b < m; ++b) DkC -= p.f.L_v(b, a, k) * p.f.C_h(i, j, b);
                    double acc = p.ea_Lh(i, j, k, a) - DkC;
                    for (int b = 0; b < m; ++b) acc += p.f.C_h(i, j, b) * p.T_mix(b, k, a);
                    R(i, j, k, a) = acc;
                }
    return R;
}

Tensor4<double> block_vvhv(const PointData& p) {
    const int n = p.n, m = p.m;
    Tensor4<double> R(m, m, n, m);
    for (int c = 0; c < m; ++c)
        for (int b = 0; b < m; ++b)
            for (int k = 0; k < n; ++k)
                for (int a = 0; a < m; ++a) {
                    double DkC = p.ek_Cv(c, b, a, k);
                    for (int d = 0; d < m; ++d)
                        DkC += p.f.L_v(c, d, k) * p.f.C_v(d, b, a) -
                               p.f.L_v(d, b, k) * p.f.C_v(c, d, a);
                    for (int d = 0; d < m; ++d) DkC -= p.f.L_v(d, a, k) * p.f.C_v(c, b, d);
                    double acc = p.ea_Lv(c, b, k, a) - DkC;
                    // The paper writes T^c_{ka} here; the dimensionally
                    // consistent reading contracts a fresh index d.
                    for (int d = 0; d < m; ++d) acc += p.f.C_v(c, b, d) * p.T_mix(d, k, a);
                    R(c, b, k, a) = acc;
                }
    return R;
}

Tensor4<double> block_hhvv(const PointData& p) {
    const int n = p.n, m = p.m;
    Tensor4<double> R(n, n, m, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c) {
                    double acc = p.ea_Ch(i, j, b, c) - p.ea_Ch(i, j, c, b);
                    for (int h = 0; h < n; ++h)
                        acc += p.f.C_h(h, j, b) * p.f.C_h(i, h, c) -
                               p.f.C_h(h, j, c) * p.f.C_h(i, h, b);
                    R(i, j, b, c) = acc;
                }
    return R;
}

Tensor4<double> block_vvvv(const PointData& p) {
    const int m = p.m;
    Tensor4<double> R(m, m, m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    double acc = p.ea_Cv(a, b, c, d) - p.ea_Cv(a, b, d, c);
                    for (int e = 0; e < m; ++e)
                        acc += p.f.C_v(e, b, c) * p.f.C_v(a, e, d) -
                               p.f.C_v(e, b, d) * p.f.C_v(a, e, c);
                    R(a, b, c, d) = acc;
                }
    return R;
}

} // namespace

CurvatureTensor dcurvature(const DConnection& conn, const NConnection& N, const ChartPoint& u) {
    PointData p = collect(conn, N, u);
    return CurvatureTensor{block_hhhh(p), block_vvhh(p), block_hhhv(p),
                           block_vvhv(p), block_hhvv(p), block_vvvv(p)};
}

TangentCurvature tangent_dcurvature(const DConnection& conn, const NConnection& N,
                                    const ChartPoint& u) {
    if (conn.n() != conn.m())
        throw DimensionMismatch("tangent curvature needs the tangent model n == m");
    PointData p = collect(conn, N, u);
    return TangentCurvature{block_hhhh(p), block_hhhv(p), block_vvvv(p)};
}

RicciDTensor ricci(const CurvatureTensor& R) {
    const int n = R.R_hhhh.dim1();
    const int m = R.R_vvvv.dim1();
    RicciDTensor out{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, m),
                     Eigen::MatrixXd::Zero(m, n), Eigen::MatrixXd::Zero(m, m)};
    for (int h = 0; h < n; ++h)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += R.R_hhhh(k, h, j, k);
            out.R_hh(h, j) = acc;
        }
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < m; ++a) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += R.R_hhhv(k, i, k, a);
            out.R_hv(i, a) = -acc;
        }
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int b = 0; b < m; ++b) acc += R.R_vvhv(b, a, i, b);
            out.R_vh(a, i) = acc;
        }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            double acc = 0.0;
            for (int c = 0; c < m; ++c) acc += R.R_vvvv(c, a, b, c);
            out.R_vv(a, b) = acc;
        }
    return out;
}

double scalar_curvature(const RicciDTensor& ric, const DMetric& dm, const ChartPoint& u) {
    Eigen::MatrixXd ginv = dm.g_block(u).mat.inverse();
    Eigen::MatrixXd hinv = dm.h_block(u).mat.inverse();
    return (ginv * ric.R_hh).trace() + (hinv * ric.R_vv).trace();
}

EinsteinBlocks einstein_dtensor(const RicciDTensor& ric, const DMetric& dm, const ChartPoint& u) {
    double s = scalar_curvature(ric, dm, u);
    EinsteinBlocks out;
    out.G_hh = ric.R_hh - 0.5 * s * dm.g_block(u).mat;
    out.G_vv = ric.R_vv - 0.5 * s * dm.h_block(u).mat;
    out.G_hv = ric.R_hv;  // off blocks of the d-metric vanish in the adapted frame
    out.G_vh = ric.R_vh;
    return out;
}

CurvatureTensor deform_curvature(const DConnection& base, const DeformationTensor& P,
                                 const NConnection& N, const ChartPoint& u) {
    CurvatureTensor R = dcurvature(base, N, u);
    PointData bp = collect(base, N, u);
    const int n = bp.n, m = bp.m;

    ConnJets pj = P.jets(u, 1);
    JetMatrix njets = N.jets(u, 1);
    ConnValues pv = values_of(pj);
    Tensor4<double> ek_PLh, ea_PLh, ek_PLv, ea_PLv, ek_PCh, ea_PCh, ek_PCv, ea_PCv;
    differentiate(pj.L_h, njets, n, ek_PLh, ea_PLh, m);
    differentiate(pj.L_v, njets, n, ek_PLv, ea_PLv, m);
    differentiate(pj.C_h, njets, n, ek_PCh, ea_PCh, m);
    differentiate(pj.C_v, njets, n, ek_PCv, ea_PCv, m);

    // Bilinear split of every product: delta(A*B) = dA*B + A*dB + dA*dB.
    auto quad = [](double A, double dA, double B, double dB) {
        return dA * B + A * dB + dA * dB;
    };

    for (int i = 0; i < n; ++i)
        for (int h = 0; h < n; ++h)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double d = ek_PLh(i, h, j, k) - ek_PLh(i, h, k, j);
                    for (int mm = 0; mm < n; ++mm)
                        d += quad(bp.f.L_h(mm, h, j), pv.L_h(mm, h, j), bp.f.L_h(i, mm, k),
                                  pv.L_h(i, mm, k)) -
                             quad(bp.f.L_h(mm, h, k), pv.L_h(mm, h, k), bp.f.L_h(i, mm, j),
                                  pv.L_h(i, mm, j));
                    for (int a = 0; a < m; ++a) d -= pv.C_h(i, h, a) * bp.Omega(a, k, j);
                    R.R_hhhh(i, h, j, k) += d;
                }

    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double d = ek_PLv(a, b, j, k) - ek_PLv(a, b, k, j);
                    for (int c = 0; c < m; ++c)
                        d += quad(bp.f.L_v(c, b, j), pv.L_v(c, b, j), bp.f.L_v(a, c, k),
                                  pv.L_v(a, c, k)) -
                             quad(bp.f.L_v(c, b, k), pv.L_v(c, b, k), bp.f.L_v(a, c, j),
                                  pv.L_v(a, c, j));
                    for (int c = 0; c < m; ++c) d -= pv.C_v(a, b, c) * bp.Omega(c, k, j);
                    R.R_vvhh(a, b, j, k) += d;
                }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int a = 0; a < m; ++a) {
                    double dDkC = ek_PCh(i, j, a, k);
                    for (int mm = 0; mm < n; ++mm)
                        dDkC += quad(bp.f.L_h(i, mm, k), pv.L_h(i, mm, k), bp.f.C_h(mm, j, a),
                                     pv.C_h(mm, j, a)) -
                                quad(bp.f.L_h(mm, j, k), pv.L_h(mm, j, k), bp.f.C_h(i, mm, a),
                                     pv.C_h(i, mm, a));
                    for (int b = 0; b < m; ++b)
                        dDkC -= quad(bp.f.L_v(b, a, k), pv.L_v(b, a, k), bp.f.C_h(i, j, b),
                                     pv.C_h(i, j, b));
                    double d = ea_PLh(i, j, k, a) - dDkC;
                    // delta of C^i_{jb} T^b_{ka} with delta T = -P_Lv(b, a, k)
                    for (int b = 0; b < m; ++b)
                        d += pv.C_h(i, j, b) * bp.T_mix(b, k, a) +
                             bp.f.C_h(i, j, b) * (-pv.L_v(b, a, k)) +
                             pv.C_h(i, j, b) * (-pv.L_v(b, a, k));
                    R.R_hhhv(i, j, k, a) += d;
                }

    for (int c = 0; c < m; ++c)
        for (int b = 0; b < m; ++b)
            for (int k = 0; k < n; ++k)
                for (int a = 0; a < m; ++a) {
                    double dDkC = ek_PCv(c, b, a, k);
                    for (int dd = 0; dd < m; ++dd)
                        dDkC += quad(bp.f.L_v(c, dd, k), pv.L_v(c, dd, k), bp.f.C_v(dd, b, a),
                                     pv.C_v(dd, b, a)) -
                                quad(bp.f.L_v(dd, b, k), pv.L_v(dd, b, k), bp.f.C_v(c, dd, a),
                                     pv.C_v(c, dd, a));
                    for (int dd = 0; dd < m; ++dd)
                        dDkC -= quad(bp.f.L_v(dd, a, k), pv.L_v(dd, a, k), bp.f.C_v(c, b, dd),
                                     pv.C_v(c, b, dd));
                    double d = ea_PLv(c, b, k, a) - dDkC;
                    for (int dd = 0; dd < m; ++dd)
                        d += pv.C_v(c, b, dd) * bp.T_mix(dd, k, a) +
                             bp.f.C_v(c, b, dd) * (-pv.L_v(dd, a, k)) +
                             pv.C_v(c, b, dd) * (-pv.L_v(dd, a, k));
                    R.R_vvhv(c, b, k, a) += d;
                }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c) {
                    double d = ea_PCh(i, j, b, c) - ea_PCh(i, j, c, b);
                    for (int h = 0; h < n; ++h)
                        d += quad(bp.f.C_h(h, j, b), pv.C_h(h, j, b), bp.f.C_h(i, h, c),
                                  pv.C_h(i, h, c)) -
                             quad(bp.f.C_h(h, j, c), pv.C_h(h, j, c), bp.f.C_h(i, h, b),
                                  pv.C_h(i, h, b));
                    R.R_hhvv(i, j, b, c) += d;
                }

    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int dd = 0; dd < m; ++dd) {
                    double d = ea_PCv(a, b, c, dd) - ea_PCv(a, b, dd, c);
                    for (int e = 0; e < m; ++e)
                        d += quad(bp.f.C_v(e, b, c), pv.C_v(e, b, c), bp.f.C_v(a, e, dd),
                                  pv.C_v(a, e, dd)) -
                             quad(bp.f.C_v(e, b, dd), pv.C_v(e, b, dd), bp.f.C_v(a, e, c),
                                  pv.C_v(a, e, c));
                    R.R_vvvv(a, b, c, dd) += d;
                }

    return R;
}

} // namespace nlf
