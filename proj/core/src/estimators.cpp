#include "okdmd/estimators.hpp"

#include <Eigen/Cholesky>

#include "okdmd/dynamics.hpp"
#include "okdmd/errors.hpp"

namespace okdmd {

namespace {

void check_pack(const GramPack& pack) {
  if (pack.M < 1 || pack.n < 1)
    throw InputError("gram pack is empty");
  if (pack.G_r.rows() != pack.M || pack.G_r.cols() != pack.M)
    throw InputError("gram pack: G_r has the wrong shape");
  if (pack.D.rows() != pack.n || pack.D.cols() != pack.M)
    throw InputError("gram pack: D has the wrong shape");
}

Model model_from_pack(const GramPack& pack) {
  Model m;
  m.trajs = pack.trajs;
  m.params_r = pack.params_r;
  m.quad = pack.quad;
  return m;
}

}  // namespace

Model fit_sldmd(const GramPack& pack, std::optional<double> rel_cutoff) {
  check_pack(pack);
  Model m = model_from_pack(pack);
  // Multiply through the SVD factors of the pseudoinverse rather than the
  // materialized matrix. For a symmetric PSD Gram the factors satisfy W = V,
  // so this makes A agree exactly with the mode expansion (D V) Sigma W^T;
  // the reciprocal singular values amplify any difference in association
  // order far above the identity's tolerance otherwise.
  const SvdResult svd = pinv_svd(pack.G_r, rel_cutoff).svd;
  const Eigen::MatrixXd scaled = (pack.D * svd.W) * svd.Sigma.asDiagonal();
  m.A = scaled * svd.V.transpose();
  m.method = FitMethod::sldmd;
  m.lambda = 0.0;
  return m;
}

Model fit_okr(const GramPack& pack, double lambda) {
  check_pack(pack);
  if (lambda < 0.0) throw InputError("fit_okr: lambda must be nonnegative");
  if (lambda == 0.0) {
    const PinvResult pv = pinv_svd(pack.G_r);
    if (pv.svd.rank < pack.M)
      throw RankError(
          "fit_okr: lambda = 0 needs a numerically full-rank occupation Gram "
          "(rank " + std::to_string(pv.svd.rank) + " of " + std::to_string(pack.M) +
          "); use fit_sldmd for rank-deficient data");
  }
  const Eigen::MatrixXd lhs =
      pack.G_r + lambda * Eigen::MatrixXd::Identity(pack.M, pack.M);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(lhs);
  if (ldlt.info() != Eigen::Success)
    throw RankError("fit_okr: factorization of G_r + lambda*I failed");
  Model m = model_from_pack(pack);
  // A (G_r + lambda I) = D, transposed into a standard symmetric solve.
  m.A = ldlt.solve(pack.D.transpose()).transpose();
  m.method = FitMethod::okr;
  m.lambda = lambda;
  return m;
}

Eigen::VectorXd occupation_features(const std::vector<Trajectory>& trajs,
                                    const Eigen::VectorXd& x, const KernelParams& params_r,
                                    const QuadratureSpec& quad) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(trajs.size()));
  for (std::size_t j = 0; j < trajs.size(); ++j)
    r(static_cast<Eigen::Index>(j)) = occupation_eval(trajs[j], x, params_r, quad);
  return r;
}

Eigen::VectorXd eval_model(const Model& model, const Eigen::VectorXd& x) {
  if (model.A.cols() != static_cast<Eigen::Index>(model.trajs.size()))
    throw InputError("eval_model: coefficient count differs from the training set");
  return model.A * occupation_features(model.trajs, x, model.params_r, model.quad);
}

std::vector<SingularTriple> singular_triples(const GramPack& pack,
                                             std::optional<double> rel_cutoff) {
  check_pack(pack);
  const PinvResult pv = pinv_svd(pack.G_r, rel_cutoff);
  std::vector<SingularTriple> triples(static_cast<std::size_t>(pack.M));
  for (Eigen::Index k = 0; k < pack.M; ++k) {
    triples[static_cast<std::size_t>(k)] = {pv.svd.Sigma(k), pv.svd.V.col(k),
                                            pv.svd.W.col(k)};
  }
  return triples;
}

double eval_singular_function(const GramPack& pack, const SingularTriple& triple,
                              FunctionSide side, const Eigen::VectorXd& x) {
  check_pack(pack);
  if (static_cast<Eigen::Index>(pack.trajs.size()) != pack.M)
    throw InputError("gram pack carries no trajectories");
  if (x.size() != pack.n)
    throw InputError("eval_singular_function: point dimension differs from the data");
  const Eigen::VectorXd& coeff = side == FunctionSide::left ? triple.v : triple.w;
  if (coeff.size() != pack.M)
    throw InputError("eval_singular_function: coefficient length differs from M");
  double acc = 0.0;
  if (side == FunctionSide::left) {
    for (Eigen::Index j = 0; j < pack.M; ++j)
      acc += coeff(j) * eval_kernel_diff(pack.params_d, x, pack.trajs[j].start(),
                                         pack.trajs[j].end());
  } else {
    for (Eigen::Index j = 0; j < pack.M; ++j)
      acc += coeff(j) * occupation_eval(pack.trajs[j], x, pack.params_r, pack.quad);
  }
  return acc;
}

Eigen::MatrixXd extract_modes(const GramPack& pack, std::optional<double> rel_cutoff) {
  check_pack(pack);
  return pack.D * pinv_svd(pack.G_r, rel_cutoff).svd.V;
}

Trajectory predict_flow(const Model& model, const Eigen::VectorXd& x0, double horizon,
                        double dt) {
  OdeSystem fitted;
  fitted.name = "fitted model";
  fitted.dim = model.A.rows();
  fitted.field = [&model](const Eigen::VectorXd& x) { return eval_model(model, x); };
  return integrate_rk4(fitted, x0, horizon, dt);
}

}  // namespace okdmd
