#include "okdmd/gram.hpp"

#include <exception>
#include <utility>

#include "okdmd/errors.hpp"

namespace okdmd {

namespace {

// Validates the dataset up front so the parallel entry loops below cannot
// throw, and returns the common state dimension.
Eigen::Index check_dataset(const std::vector<Trajectory>& trajs) {
  if (trajs.empty()) throw InputError("gram: dataset must contain at least one trajectory");
  trajs[0].validate();
  const Eigen::Index n = trajs[0].dim();
  for (const Trajectory& t : trajs) {
    t.validate();
    if (t.dim() != n) throw InputError("gram: trajectories have different state dimensions");
  }
  return n;
}

}  // namespace

Eigen::MatrixXd gram_occupation(const std::vector<Trajectory>& trajs,
                                const KernelParams& params_r, const QuadratureSpec& quad) {
  if (!(params_r.mu > 0.0)) throw InputError("kernel: mu must be positive");
  check_dataset(trajs);
  const Eigen::Index M = static_cast<Eigen::Index>(trajs.size());
  std::vector<Eigen::VectorXd> w(M);
  for (Eigen::Index i = 0; i < M; ++i) w[i] = quadrature_weights(trajs[i], quad);

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(M * (M + 1) / 2));
  for (Eigen::Index i = 0; i < M; ++i)
    for (Eigen::Index j = i; j < M; ++j) pairs.emplace_back(i, j);

  Eigen::MatrixXd G(M, M);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long p = 0; p < static_cast<long>(pairs.size()); ++p) {
    try {
      const auto [i, j] = pairs[static_cast<std::size_t>(p)];
      const Eigen::MatrixXd kmat =
          ((trajs[i].states * trajs[j].states.transpose()) / params_r.mu).array().exp();
      G(i, j) = w[i].dot(kmat * w[j]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (Eigen::Index i = 0; i < M; ++i)
    for (Eigen::Index j = i + 1; j < M; ++j) G(j, i) = G(i, j);
  return G;
}

Eigen::MatrixXd gram_kernel_diff(const std::vector<Trajectory>& trajs,
                                 const KernelParams& params_d) {
  if (!(params_d.mu > 0.0)) throw InputError("kernel: mu must be positive");
  const Eigen::Index n = check_dataset(trajs);
  const Eigen::Index M = static_cast<Eigen::Index>(trajs.size());

  Eigen::MatrixXd S(M, n), E(M, n);
  for (Eigen::Index i = 0; i < M; ++i) {
    S.row(i) = trajs[i].states.row(0);
    E.row(i) = trajs[i].states.row(trajs[i].states.rows() - 1);
  }
  const double mu = params_d.mu;
  const Eigen::MatrixXd kee = ((E * E.transpose()) / mu).array().exp();
  const Eigen::MatrixXd kse = ((S * E.transpose()) / mu).array().exp();
  const Eigen::MatrixXd kes = ((E * S.transpose()) / mu).array().exp();
  const Eigen::MatrixXd kss = ((S * S.transpose()) / mu).array().exp();

  Eigen::MatrixXd G(M, M);
  for (Eigen::Index i = 0; i < M; ++i)
    for (Eigen::Index j = i; j < M; ++j) {
      G(i, j) = kee(i, j) - kse(i, j) - kes(i, j) + kss(i, j);
      G(j, i) = G(i, j);
    }
  return G;
}

Eigen::MatrixXd displacement_matrix(const std::vector<Trajectory>& trajs) {
  const Eigen::Index n = check_dataset(trajs);
  const Eigen::Index M = static_cast<Eigen::Index>(trajs.size());
  Eigen::MatrixXd D(n, M);
  for (Eigen::Index j = 0; j < M; ++j) D.col(j) = endpoint_displacement(trajs[j]);
  return D;
}

GramPack build_gram_pack(std::vector<Trajectory> trajs, const KernelParams& params_d,
                         const KernelParams& params_r, const QuadratureSpec& quad) {
  GramPack pack;
  pack.n = check_dataset(trajs);
  pack.M = static_cast<Eigen::Index>(trajs.size());
  pack.G_r = gram_occupation(trajs, params_r, quad);
  pack.G_d = gram_kernel_diff(trajs, params_d);
  pack.D = displacement_matrix(trajs);
  pack.quad = quad;
  pack.params_d = params_d;
  pack.params_r = params_r;
  pack.trajs = std::move(trajs);
  return pack;
}

}  // namespace okdmd
