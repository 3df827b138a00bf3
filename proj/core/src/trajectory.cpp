#include "okdmd/trajectory.hpp"

#include <cmath>

#include "okdmd/errors.hpp"

namespace okdmd {

void Trajectory::validate() const {
  if (times.size() != states.rows())
    throw InputError("trajectory: times and states lengths differ");
  if (times.size() < 3)
    throw InputError("trajectory: need at least 3 samples");
  if (states.cols() < 1)
    throw InputError("trajectory: state dimension must be >= 1");
  for (Eigen::Index i = 0; i + 1 < times.size(); ++i)
    if (!(times(i) < times(i + 1)))
      throw InputError("trajectory: times must be strictly increasing");
}

Eigen::VectorXd quadrature_weights(const Trajectory& traj, const QuadratureSpec& quad) {
  traj.validate();
  const Eigen::Index K = traj.times.size() - 1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(K + 1);

  if (quad.rule == QuadRule::trapezoid) {
    w(0) = (traj.times(1) - traj.times(0)) / 2.0;
    w(K) = (traj.times(K) - traj.times(K - 1)) / 2.0;
    for (Eigen::Index i = 1; i < K; ++i)
      w(i) = (traj.times(i + 1) - traj.times(i - 1)) / 2.0;
    return w;
  }

  const double h = (traj.times(K) - traj.times(0)) / static_cast<double>(K);
  for (Eigen::Index i = 0; i < K; ++i) {
    const double step = traj.times(i + 1) - traj.times(i);
    if (std::abs(step - h) > 1e-9 * std::max(std::abs(h), 1e-300))
      throw InputError("simpson rule requires a uniform time grid");
  }

  // Composite Simpson over the leading even interval count; an odd trailing
  // interval gets a trapezoid step instead of being dropped.
  const Eigen::Index Keven = (K % 2 == 0) ? K : K - 1;
  if (Keven >= 2) {
    w(0) += h / 3.0;
    w(Keven) += h / 3.0;
    for (Eigen::Index i = 1; i < Keven; ++i)
      w(i) += (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  }
  if (Keven != K) {
    w(K - 1) += h / 2.0;
    w(K) += h / 2.0;
  }
  return w;
}

double occupation_eval(const Trajectory& traj, const Eigen::VectorXd& x,
                       const KernelParams& params, const QuadratureSpec& quad) {
  if (!(params.mu > 0.0)) throw InputError("kernel: mu must be positive");
  const Eigen::VectorXd w = quadrature_weights(traj, quad);
  if (x.size() != traj.dim())
    throw InputError("occupation_eval: point dimension differs from trajectory");
  return w.dot(((traj.states * x) / params.mu).array().exp().matrix());
}

double occupation_inner(const Trajectory& traj_i, const Trajectory& traj_j,
                        const KernelParams& params, const QuadratureSpec& quad) {
  if (!(params.mu > 0.0)) throw InputError("kernel: mu must be positive");
  if (traj_i.dim() != traj_j.dim())
    throw InputError("occupation_inner: trajectories have different state dimensions");
  const Eigen::VectorXd wi = quadrature_weights(traj_i, quad);
  const Eigen::VectorXd wj = quadrature_weights(traj_j, quad);
  const Eigen::MatrixXd kmat =
      ((traj_i.states * traj_j.states.transpose()) / params.mu).array().exp();
  return wi.dot(kmat * wj);
}

Eigen::VectorXd endpoint_displacement(const Trajectory& traj) {
  traj.validate();
  return traj.states.row(traj.states.rows() - 1) - traj.states.row(0);
}

Eigen::MatrixXd central_difference_velocities(const Trajectory& traj) {
  traj.validate();
  const Eigen::Index K = traj.times.size() - 1;
  Eigen::MatrixXd v(K + 1, traj.dim());
  v.row(0) = (traj.states.row(1) - traj.states.row(0)) / (traj.times(1) - traj.times(0));
  v.row(K) = (traj.states.row(K) - traj.states.row(K - 1)) / (traj.times(K) - traj.times(K - 1));
  for (Eigen::Index i = 1; i < K; ++i)
    v.row(i) = (traj.states.row(i + 1) - traj.states.row(i - 1)) /
               (traj.times(i + 1) - traj.times(i - 1));
  return v;
}

}  // namespace okdmd
