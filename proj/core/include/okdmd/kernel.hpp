#pragma once

#include <Eigen/Core>

namespace okdmd {

// Exponential dot product kernel K(x,y) = exp(x.y / mu). Two instances are
// carried through the pipeline: one for the domain space (kernel differences)
// and one for the range space (occupation kernels).
struct KernelParams {
  double mu = 5.0;
};

double eval_kernel(const KernelParams& params, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y);

// d(x) = K(x, end) - K(x, start), the kernel-difference function of a
// trajectory with the given endpoints. Antisymmetric under swapping them.
double eval_kernel_diff(const KernelParams& params, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& start, const Eigen::VectorXd& end);

}  // namespace okdmd
