#pragma once

#include <vector>

#include <Eigen/Core>

#include "okdmd/trajectory.hpp"

namespace okdmd {

// Gram matrices, endpoint displacements, and the metadata needed to fit and
// evaluate models on one training dataset of M trajectories.
struct GramPack {
  Eigen::MatrixXd G_r;  // occupation-kernel Gram (range space), M x M
  Eigen::MatrixXd G_d;  // kernel-difference Gram (domain space), M x M
  Eigen::MatrixXd D;    // endpoint displacements, n x M
  Eigen::Index M = 0;
  Eigen::Index n = 0;
  QuadratureSpec quad;
  KernelParams params_d;
  KernelParams params_r;
  std::vector<Trajectory> trajs;
};

// Pairwise occupation-kernel inner products. Upper triangle is computed
// (entries fanned out across threads) and mirrored, so the result is exactly
// symmetric.
Eigen::MatrixXd gram_occupation(const std::vector<Trajectory>& trajs,
                                const KernelParams& params_r, const QuadratureSpec& quad);

// Pairwise inner products of the kernel differences d_i = K(., gamma_i(T)) -
// K(., gamma_i(0)), expanded into four exact kernel evaluations at the
// endpoints; no quadrature involved.
Eigen::MatrixXd gram_kernel_diff(const std::vector<Trajectory>& trajs,
                                 const KernelParams& params_d);

// Column j = gamma_j(T_j) - gamma_j(0).
Eigen::MatrixXd displacement_matrix(const std::vector<Trajectory>& trajs);

GramPack build_gram_pack(std::vector<Trajectory> trajs, const KernelParams& params_d,
                         const KernelParams& params_r, const QuadratureSpec& quad);

}  // namespace okdmd
