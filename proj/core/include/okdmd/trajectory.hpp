#pragma once

#include <Eigen/Core>

#include "okdmd/kernel.hpp"

namespace okdmd {

// Time-stamped samples of one solution gamma : [t_0, t_K] -> R^n. Rows of
// `states` are the samples; `times` is strictly increasing with at least
// three entries.
struct Trajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXd states;  // (K+1) x n

  Eigen::Index dim() const { return states.cols(); }
  Eigen::Index samples() const { return times.size(); }
  double duration() const { return times(times.size() - 1) - times(0); }
  Eigen::VectorXd start() const { return states.row(0); }
  Eigen::VectorXd end() const { return states.row(states.rows() - 1); }

  void validate() const;  // throws InputError on any invariant violation
};

enum class QuadRule { simpson, trapezoid };

// Quadrature nodes are always the trajectory's own sample times; only the
// rule is configurable. Simpson demands a uniform grid.
struct QuadratureSpec {
  QuadRule rule = QuadRule::simpson;
};

// Composite quadrature weights on the trajectory's time grid. Simpson handles
// an odd interval count with a trapezoid step over the last interval and
// rejects non-uniform grids (1e-9 relative step tolerance). Trapezoid works
// on any grid.
Eigen::VectorXd quadrature_weights(const Trajectory& traj, const QuadratureSpec& quad);

// Occupation kernel evaluation: integral over [0,T] of K(x, gamma(t)) dt.
double occupation_eval(const Trajectory& traj, const Eigen::VectorXd& x,
                       const KernelParams& params, const QuadratureSpec& quad);

// Occupation kernel inner product: the double integral of
// K(gamma_i(tau), gamma_j(t)) over both time ranges, approximated by the
// tensor product of the two 1-D weight vectors.
double occupation_inner(const Trajectory& traj_i, const Trajectory& traj_j,
                        const KernelParams& params, const QuadratureSpec& quad);

// gamma(T) - gamma(0), exact subtraction of the stored endpoint samples.
Eigen::VectorXd endpoint_displacement(const Trajectory& traj);

// Sample-wise velocity estimate: central differences inside, one-sided at the
// ends. Inspection helper only; no estimator consumes it.
Eigen::MatrixXd central_difference_velocities(const Trajectory& traj);

}  // namespace okdmd
