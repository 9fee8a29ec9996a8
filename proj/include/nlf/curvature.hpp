#pragma once

#include "nlf/connection.hpp"

namespace nlf {

// The six irreducible d-curvature blocks at a point. Index order matches the
// coefficient formulas: the last two slots are the (reversed) plane of the
// curvature operator, so R_hhhh(i, h, j, k) is antisymmetric in (j, k).
struct CurvatureTensor {
    Tensor4<double> R_hhhh;  // R^i_{hjk}
    Tensor4<double> R_vvhh;  // R^a_{bjk}
    Tensor4<double> R_hhhv;  // R^i_{jka}
    Tensor4<double> R_vvhv;  // R^c_{bka}
    Tensor4<double> R_hhvv;  // R^i_{jbc}
    Tensor4<double> R_vvvv;  // R^a_{bcd}
};

// Tangent-model reduction: the three blocks that survive when the v-families
// mirror the h-families.
struct TangentCurvature {
    Tensor4<double> R_hhhh;
    Tensor4<double> R_hhhv;
    Tensor4<double> R_vvvv;
};

struct RicciDTensor {
    Eigen::MatrixXd R_hh;  // R_ij
    Eigen::MatrixXd R_hv;  // R_ia
    Eigen::MatrixXd R_vh;  // R_ai
    Eigen::MatrixXd R_vv;  // R_ab
};

struct EinsteinBlocks {
    Eigen::MatrixXd G_hh;
    Eigen::MatrixXd G_hv;
    Eigen::MatrixXd G_vh;
    Eigen::MatrixXd G_vv;
};

// Full six-block curvature of a d-connection; needs one derivative order of
// the connection families.
CurvatureTensor dcurvature(const DConnection& conn, const NConnection& N, const ChartPoint& u);

// Reduced three-block curvature for tangent-model connections; the blocks
// coincide with the corresponding blocks of `dcurvature`.
TangentCurvature tangent_dcurvature(const DConnection& conn, const NConnection& N,
                                    const ChartPoint& u);

RicciDTensor ricci(const CurvatureTensor& R);

double scalar_curvature(const RicciDTensor& ric, const DMetric& dm, const ChartPoint& u);

EinsteinBlocks einstein_dtensor(const RicciDTensor& ric, const DMetric& dm, const ChartPoint& u);

// Curvature of (base + P) via the deformation identity: the curvature of the
// base plus the covariant-exterior-derivative and wedge terms of P, expanded
// in components. Agrees with dcurvature(base.deform(P)) up to roundoff.
CurvatureTensor deform_curvature(const DConnection& base, const DeformationTensor& P,
                                 const NConnection& N, const ChartPoint& u);

} // namespace nlf
