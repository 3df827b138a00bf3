#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "okdmd/gram.hpp"
#include "okdmd/pinv.hpp"

namespace okdmd {

enum class FitMethod { sldmd, okr };

// Fitted vector-field model fhat(x) = A * r(x), where r_j(x) is the
// occupation-kernel evaluation of training trajectory j at x.
struct Model {
  Eigen::MatrixXd A;  // n x M
  std::vector<Trajectory> trajs;
  KernelParams params_r;
  QuadratureSpec quad;
  FitMethod method = FitMethod::sldmd;
  double lambda = 0.0;
};

// One singular triple of the finite-rank operator representation: the left
// singular function is v^T d (kernel differences), the right one is w^T r
// (occupation kernels).
struct SingularTriple {
  double sigma = 0.0;
  Eigen::VectorXd v;
  Eigen::VectorXd w;
};

enum class FunctionSide { left, right };

// A = D * G_r^+; rank deficiency is absorbed by the pseudoinverse.
Model fit_sldmd(const GramPack& pack, std::optional<double> rel_cutoff = std::nullopt);

// A solves A (G_r + lambda I) = D. lambda = 0 is allowed only when G_r is
// numerically full rank (otherwise RankError points at fit_sldmd).
Model fit_okr(const GramPack& pack, double lambda);

// r(x): occupation-kernel features of x against a training set.
Eigen::VectorXd occupation_features(const std::vector<Trajectory>& trajs,
                                    const Eigen::VectorXd& x, const KernelParams& params_r,
                                    const QuadratureSpec& quad);

Eigen::VectorXd eval_model(const Model& model, const Eigen::VectorXd& x);

// All M triples from the SVD of G_r^+, sorted nonincreasing in sigma (the
// dropped directions come back with sigma = 0).
std::vector<SingularTriple> singular_triples(const GramPack& pack,
                                             std::optional<double> rel_cutoff = std::nullopt);

double eval_singular_function(const GramPack& pack, const SingularTriple& triple,
                              FunctionSide side, const Eigen::VectorXd& x);

// Modes xi = D * V from the SVD of G_r^+; xi * diag(Sigma) * W^T reproduces
// the sldmd coefficient matrix.
Eigen::MatrixXd extract_modes(const GramPack& pack,
                              std::optional<double> rel_cutoff = std::nullopt);

// Fixed-step RK4 flow of the fitted field from x0.
Trajectory predict_flow(const Model& model, const Eigen::VectorXd& x0, double horizon,
                        double dt);

}  // namespace okdmd
