#include "okdmd/kernel.hpp"

#include <cmath>

#include "okdmd/errors.hpp"

namespace okdmd {

namespace {

void check_args(const KernelParams& params, Eigen::Index nx, Eigen::Index ny) {
  if (!(params.mu > 0.0)) throw InputError("kernel: mu must be positive");
  if (nx < 1) throw InputError("kernel: arguments must have dimension >= 1");
  if (nx != ny) throw InputError("kernel: argument dimensions differ");
}

}  // namespace

double eval_kernel(const KernelParams& params, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y) {
  check_args(params, x.size(), y.size());
  return std::exp(x.dot(y) / params.mu);
}

double eval_kernel_diff(const KernelParams& params, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& start, const Eigen::VectorXd& end) {
  check_args(params, x.size(), start.size());
  check_args(params, x.size(), end.size());
  return eval_kernel(params, x, end) - eval_kernel(params, x, start);
}

}  // namespace okdmd
