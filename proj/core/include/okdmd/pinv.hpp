#pragma once

#include <optional>

#include <Eigen/Core>

namespace okdmd {

// SVD of a pseudoinverse: pinv = W * diag(Sigma) * V^T. Sigma is sorted
// nonincreasing; singular values dropped by the cutoff are stored as exact
// zeros and `rank` counts the retained ones.
struct SvdResult {
  Eigen::MatrixXd W;
  Eigen::VectorXd Sigma;
  Eigen::MatrixXd V;
  Eigen::Index rank = 0;
};

struct PinvResult {
  Eigen::MatrixXd pinv;
  SvdResult svd;
};

// Truncated-SVD Moore-Penrose pseudoinverse. Input singular values at or
// below rel_cutoff * sigma_max are dropped; the default cutoff is
// machine-epsilon * max(rows, cols). The pinv field is materialized from the
// returned factors, so W * diag(Sigma) * V^T reconstructs it exactly.
// Bitwise-symmetric input goes through a symmetric eigendecomposition, which
// keeps the pseudoinverse of a Gram matrix symmetric.
PinvResult pinv_svd(const Eigen::MatrixXd& A,
                    std::optional<double> rel_cutoff = std::nullopt);

// Finite-rank representation G_r^+ * G_d.
Eigen::MatrixXd finite_rank_matrix(const Eigen::MatrixXd& G_r, const Eigen::MatrixXd& G_d,
                                   std::optional<double> rel_cutoff = std::nullopt);

}  // namespace okdmd
