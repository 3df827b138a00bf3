#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "okdmd/dynamics.hpp"
#include "okdmd/estimators.hpp"

namespace okdmd {

// One row of a regularization sweep. sldmd_err does not depend on lambda and
// repeats identically across the rows of one sweep.
struct SweepRow {
  double lambda = 0.0;
  double okr_err = 0.0;
  double sldmd_err = 0.0;
};

// Occupation features of every trajectory at every grid node: R(j, p) is
// trajectory j evaluated at points.row(p). Rows are filled independently, so
// the assembly parallelizes without changing results.
Eigen::MatrixXd occupation_feature_matrix(const std::vector<Trajectory>& trajs,
                                          const Eigen::MatrixXd& points,
                                          const KernelParams& params_r,
                                          const QuadratureSpec& quad);

// Mean over the grid nodes of |f_component(x) - fhat_component(x)|.
double mean_abs_field_error(const Model& model, const OdeSystem& system, int component,
                            const EvalGrid& grid);

// 25 logarithmically spaced values from 1e-10 to 1e4.
std::vector<double> default_lambda_grid();

// Builds the Gram pack and the feature matrix once, fits sldmd once and okr
// per lambda, and scores every fit against the true field on the grid. Rows
// come back in the order of the lambda list.
std::vector<SweepRow> run_lambda_sweep(const std::vector<Trajectory>& dataset,
                                       const KernelParams& params_d,
                                       const KernelParams& params_r,
                                       const QuadratureSpec& quad,
                                       const std::vector<double>& lambdas,
                                       const OdeSystem& system, int component,
                                       const EvalGrid& grid,
                                       std::optional<double> rel_cutoff = std::nullopt);

}  // namespace okdmd
