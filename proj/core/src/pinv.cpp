#include "okdmd/pinv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "okdmd/errors.hpp"

namespace okdmd {

namespace {

bool bitwise_symmetric(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) return false;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = i + 1; j < A.cols(); ++j)
      if (A(i, j) != A(j, i)) return false;
  return true;
}

}  // namespace

PinvResult pinv_svd(const Eigen::MatrixXd& A, std::optional<double> rel_cutoff) {
  if (A.rows() == 0 || A.cols() == 0) throw InputError("pinv_svd: empty matrix");
  if (!A.allFinite()) throw InputError("pinv_svd: matrix has non-finite entries");
  double cut = std::numeric_limits<double>::epsilon() *
               static_cast<double>(std::max(A.rows(), A.cols()));
  if (rel_cutoff) {
    if (*rel_cutoff < 0.0) throw InputError("pinv_svd: rel_cutoff must be nonnegative");
    cut = *rel_cutoff;
  }

  // SVD of the input with singular values sorted nonincreasing. Symmetric
  // matrices take the eigendecomposition route: it is cheaper and gives
  // identical left and right vectors, so the pseudoinverse of a Gram matrix
  // stays symmetric instead of symmetric-up-to-roundoff.
  Eigen::MatrixXd U, Vin;
  Eigen::VectorXd sv;
  if (bitwise_symmetric(A)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
    if (eig.info() != Eigen::Success)
      throw RankError("pinv_svd: eigendecomposition failed to converge");
    const Eigen::VectorXd lam = eig.eigenvalues();
    const Eigen::Index m = lam.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::abs(lam(a)) > std::abs(lam(b));
    });
    U.resize(m, m);
    Vin.resize(m, m);
    sv.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const Eigen::Index src = order[static_cast<std::size_t>(k)];
      sv(k) = std::abs(lam(src));
      Vin.col(k) = eig.eigenvectors().col(src);
      U.col(k) = lam(src) < 0.0 ? (-Vin.col(k)).eval() : Vin.col(k);
    }
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    U = svd.matrixU();
    Vin = svd.matrixV();
    sv = svd.singularValues();
  }

  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut * smax) ++rank;

  // The pseudoinverse's own SVD: reciprocals of the retained block, reversed
  // so Sigma is again nonincreasing, followed by exact zeros; W and V are the
  // input's V and U columns in the matching order.
  const Eigen::Index L = sv.size();
  PinvResult out;
  out.svd.rank = rank;
  out.svd.Sigma.resize(L);
  out.svd.W.resize(Vin.rows(), L);
  out.svd.V.resize(U.rows(), L);
  for (Eigen::Index k = 0; k < L; ++k) {
    const Eigen::Index src = k < rank ? rank - 1 - k : k;
    out.svd.Sigma(k) = k < rank ? 1.0 / sv(src) : 0.0;
    out.svd.W.col(k) = Vin.col(src);
    out.svd.V.col(k) = U.col(src);
  }
  out.pinv = out.svd.W * out.svd.Sigma.asDiagonal() * out.svd.V.transpose();
  return out;
}

Eigen::MatrixXd finite_rank_matrix(const Eigen::MatrixXd& G_r, const Eigen::MatrixXd& G_d,
                                   std::optional<double> rel_cutoff) {
  if (G_r.rows() != G_r.cols() || G_r.rows() != G_d.rows() || G_d.rows() != G_d.cols())
    throw InputError("finite_rank_matrix: G_r and G_d must be square with equal sizes");
  return pinv_svd(G_r, rel_cutoff).pinv * G_d;
}

}  // namespace okdmd
