#include "okdmd/sweep.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "okdmd/errors.hpp"
#include "okdmd/gram.hpp"

namespace okdmd {

namespace {

void check_points(const std::vector<Trajectory>& trajs, const Eigen::MatrixXd& points) {
  if (trajs.empty()) throw InputError("occupation_feature_matrix: no trajectories");
  if (points.rows() == 0) throw InputError("occupation_feature_matrix: no evaluation points");
  if (points.cols() != trajs.front().dim())
    throw InputError("occupation_feature_matrix: point dimension " +
                     std::to_string(points.cols()) + " does not match trajectory dimension " +
                     std::to_string(trajs.front().dim()));
}

// Shared by the public scorer and the sweep loop so both produce bitwise
// identical numbers for the same model.
double mean_abs_error_impl(const Eigen::MatrixXd& A, const Eigen::MatrixXd& R,
                           const Eigen::MatrixXd& field_values, int component) {
  const Eigen::Index npts = R.cols();
  const Eigen::RowVectorXd fitted = A.row(component) * R;
  double acc = 0.0;
  for (Eigen::Index p = 0; p < npts; ++p)
    acc += std::abs(fitted(p) - field_values(p, component));
  return acc / static_cast<double>(npts);
}

}  // namespace

Eigen::MatrixXd occupation_feature_matrix(const std::vector<Trajectory>& trajs,
                                          const Eigen::MatrixXd& points,
                                          const KernelParams& params_r,
                                          const QuadratureSpec& quad) {
  if (!(params_r.mu > 0.0)) throw InputError("kernel: mu must be positive");
  check_points(trajs, points);
  for (const auto& traj : trajs) {
    traj.validate();
    if (traj.dim() != points.cols())
      throw InputError("occupation_feature_matrix: trajectories have mixed dimensions");
  }

  const Eigen::Index M = static_cast<Eigen::Index>(trajs.size());
  Eigen::MatrixXd R(M, points.rows());

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index j = 0; j < M; ++j) {
    try {
      const Eigen::VectorXd w = quadrature_weights(trajs[j], quad);
      R.row(j) = w.transpose() *
                 ((trajs[j].states * points.transpose()) / params_r.mu).array().exp().matrix();
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return R;
}

double mean_abs_field_error(const Model& model, const OdeSystem& system, int component,
                            const EvalGrid& grid) {
  if (component < 0 || component >= model.A.rows())
    throw InputError("mean_abs_field_error: component " + std::to_string(component) +
                     " out of range for a " + std::to_string(model.A.rows()) +
                     "-dimensional model");
  const FieldGrid truth = true_field_grid(system, grid);
  if (truth.points.cols() != model.A.rows())
    throw InputError("mean_abs_field_error: grid dimension does not match the model");
  const Eigen::MatrixXd R =
      occupation_feature_matrix(model.trajs, truth.points, model.params_r, model.quad);
  return mean_abs_error_impl(model.A, R, truth.values, component);
}

std::vector<double> default_lambda_grid() {
  std::vector<double> lambdas(25);
  for (int k = 0; k < 25; ++k)
    lambdas[static_cast<std::size_t>(k)] = std::pow(10.0, -10.0 + 14.0 * k / 24.0);
  return lambdas;
}

std::vector<SweepRow> run_lambda_sweep(const std::vector<Trajectory>& dataset,
                                       const KernelParams& params_d,
                                       const KernelParams& params_r,
                                       const QuadratureSpec& quad,
                                       const std::vector<double>& lambdas,
                                       const OdeSystem& system, int component,
                                       const EvalGrid& grid,
                                       std::optional<double> rel_cutoff) {
  if (lambdas.empty()) throw InputError("run_lambda_sweep: empty lambda list");
  for (double lambda : lambdas)
    if (!(lambda > 0.0))
      throw InputError("run_lambda_sweep: lambda values must be positive, got " +
                       std::to_string(lambda));

  const GramPack pack = build_gram_pack(dataset, params_d, params_r, quad);
  if (component < 0 || component >= pack.n)
    throw InputError("run_lambda_sweep: component " + std::to_string(component) +
                     " out of range for " + std::to_string(pack.n) + "-dimensional data");

  const FieldGrid truth = true_field_grid(system, grid);
  if (truth.points.cols() != pack.n)
    throw InputError("run_lambda_sweep: grid dimension does not match the dataset");
  const Eigen::MatrixXd R =
      occupation_feature_matrix(pack.trajs, truth.points, params_r, quad);

  const Model sldmd = fit_sldmd(pack, rel_cutoff);
  const double sldmd_err = mean_abs_error_impl(sldmd.A, R, truth.values, component);

  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    Model okr;
    try {
      okr = fit_okr(pack, lambda);
    } catch (const RankError& err) {
      throw RankError(std::string(err.what()) + " (lambda=" + std::to_string(lambda) + ")");
    }
    rows.push_back({lambda, mean_abs_error_impl(okr.A, R, truth.values, component), sldmd_err});
  }
  return rows;
}

}  // namespace okdmd
