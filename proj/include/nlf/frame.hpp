#pragma once

#include <Eigen/Dense>

#include "nlf/metric.hpp"

namespace nlf {

// One-point d-metric data in plain matrices, as produced by the off-diagonal
// decomposition.
struct DMetricPoint {
    Eigen::MatrixXd g;  // n x n
    Eigen::MatrixXd h;  // m x m
    Eigen::MatrixXd N;  // m x n
};

// N-adapted frame/coframe with identity leg blocks:
//   e     = [ I  N ]        theta = [ I  -N ]
//           [ 0  I ]                [ 0   I ]
// where the (i, a) entry of the upper-right block is N^a_i. They satisfy
// e * theta = I exactly, and theta * ansatz * theta^T = blockdiag(g, h).
struct AdaptedFrame {
    Eigen::MatrixXd e;
    Eigen::MatrixXd theta;
};

AdaptedFrame adapted_frame(const Eigen::MatrixXd& N);
AdaptedFrame adapted_frame(const NConnection& N, const ChartPoint& u);

// The generic off-diagonal ansatz built from (g, h, N):
//   [ g_ij + N^a_i N^b_j h_ab    N^e_i h_ea ]
//   [ N^e_j h_ae                 h_ab       ]
Eigen::MatrixXd assemble_offdiagonal(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h,
                                     const Eigen::MatrixXd& N);
Eigen::MatrixXd assemble_offdiagonal(const DMetric& dm, const ChartPoint& u);

// Inverse of the assembly: h from the lower-right block, N from the off
// block, g by subtraction. Throws SingularVBlock when the v-block cannot be
// inverted.
DMetricPoint decompose_offdiagonal(const Eigen::MatrixXd& G, int n, int m);

// Almost complex structure induced by the N-connection (n == m): constant
// [ 0 -I; I 0 ] in the adapted basis, conjugated into the coordinate basis.
// Satisfies F*F = -I in either basis.
Eigen::MatrixXd almost_complex(const Eigen::MatrixXd& N);
Eigen::MatrixXd almost_complex(const NConnection& N, const ChartPoint& u);

} // namespace nlf
