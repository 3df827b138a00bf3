#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "okdmd/dynamics.hpp"
#include "okdmd/errors.hpp"
#include "okdmd/estimators.hpp"
#include "okdmd/gram.hpp"
#include "okdmd/pinv.hpp"

using namespace okdmd;

namespace {

const QuadratureSpec kSimpson{QuadRule::simpson};

Trajectory constant_trajectory(const Eigen::VectorXd& c, double T, int segments) {
  Trajectory traj;
  traj.times.resize(segments + 1);
  traj.states.resize(segments + 1, c.size());
  for (int k = 0; k <= segments; ++k) {
    traj.times(k) = T * k / segments;
    traj.states.row(k) = c.transpose();
  }
  return traj;
}

GramPack spiral_pack(double mu = 1.0) {
  const OdeSystem spiral = spiral_system();
  const std::vector<Eigen::Vector2d> ics = {{1.5, 0.0},   {0.0, 1.5},  {-1.5, 0.0},
                                            {0.0, -1.5},  {0.9, 0.9},  {-0.9, -0.9}};
  std::vector<Trajectory> trajs;
  for (const auto& ic : ics) trajs.push_back(integrate_rk4(spiral, ic, 0.5, 0.01));
  return build_gram_pack(std::move(trajs), {mu}, {mu}, kSimpson);
}

GramPack duffing_pack(int side, double mu) {
  DatasetSpec spec;
  spec.system = duffing_system();
  spec.grid_min = Eigen::Vector2d(-2.0, -2.0);
  spec.grid_max = Eigen::Vector2d(2.0, 2.0);
  spec.grid_counts = {side, side};
  return build_gram_pack(generate_dataset(spec), {mu}, {mu}, kSimpson);
}

double rel_fro(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

}  // namespace

TEST_CASE("sldmd fit on degenerate packs") {
  // All trajectories closed: D = 0 and the fit is identically zero.
  Trajectory closed = constant_trajectory(Eigen::Vector2d(0.4, -0.2), 1.0, 10);
  GramPack pack = build_gram_pack({closed, closed}, {5.0}, {5.0}, kSimpson);
  CHECK(fit_sldmd(pack).A.norm() == 0.0);

  // G_r = I: the pseudoinverse is the identity and A reduces to D.
  pack = spiral_pack();
  pack.G_r = Eigen::MatrixXd::Identity(pack.M, pack.M);
  const Model m = fit_sldmd(pack);
  CHECK(rel_fro(m.A, pack.D) <= 1e-14);
  CHECK(m.method == FitMethod::sldmd);
  CHECK(m.lambda == 0.0);
}

TEST_CASE("sldmd recovers a one-dimensional linear field") {
  DatasetSpec spec;
  spec.system = linear_decay_system(1);
  spec.grid_min = Eigen::VectorXd::Constant(1, -1.0);
  spec.grid_max = Eigen::VectorXd::Constant(1, 1.0);
  spec.grid_counts = {10};
  const GramPack pack = build_gram_pack(generate_dataset(spec), {1.0}, {1.0}, kSimpson);
  const Model m = fit_sldmd(pack);

  double sup = 0.0;
  for (int i = 0; i <= 20; ++i) {
    Eigen::VectorXd x(1);
    x << -1.0 + 0.1 * i;
    sup = std::max(sup, std::abs(eval_model(m, x)(0) - (-x(0))));
  }
  CHECK(sup <= 1e-2);
}

TEST_CASE("okr fit") {
  const GramPack pack = spiral_pack();
  CHECK_THROWS_AS(fit_okr(pack, -1.0), InputError);

  // Large regularization shrinks the solution towards zero at rate 1/lambda.
  const double lambda = 1e12;
  const Model big = fit_okr(pack, lambda);
  CHECK(big.A.norm() <= pack.D.norm() / lambda * (1.0 + 1e-6));
  CHECK(big.method == FitMethod::okr);
  CHECK(big.lambda == lambda);

  // This dataset is numerically full rank, so lambda = 0 is legal and matches
  // the pseudoinverse fit.
  const Model zero = fit_okr(pack, 0.0);
  CHECK(rel_fro(zero.A, fit_sldmd(pack).A) <= 1e-8);

  // A duplicated trajectory makes G_r singular and lambda = 0 an error.
  std::vector<Trajectory> dup = pack.trajs;
  dup.push_back(dup.front());
  const GramPack singular = build_gram_pack(std::move(dup), {1.0}, {1.0}, kSimpson);
  CHECK_THROWS_AS(fit_okr(singular, 0.0), RankError);
}

TEST_CASE("okr approaches sldmd as regularization vanishes") {
  const GramPack pack = spiral_pack();
  const Model sldmd = fit_sldmd(pack);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {1e-4, 1e-8, 1e-12}) {
    const double gap = rel_fro(fit_okr(pack, lambda).A, sldmd.A);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev <= 1e-6);
}

TEST_CASE("training consistency") {
  const GramPack pack = spiral_pack();
  const Model m = fit_sldmd(pack);
  CHECK((m.A * pack.G_r - pack.D).norm() / pack.D.norm() <= 1e-8);

  // Rank-deficient training set: consistency holds on the range of G_r.
  std::vector<Trajectory> dup = pack.trajs;
  dup.push_back(dup.front());
  const GramPack singular = build_gram_pack(std::move(dup), {1.0}, {1.0}, kSimpson);
  const Model ms = fit_sldmd(singular);
  const Eigen::MatrixXd projector = pinv_svd(singular.G_r).pinv * singular.G_r;
  CHECK(rel_fro(ms.A * singular.G_r, singular.D * projector) <= 1e-8);
}

TEST_CASE("model evaluation") {
  const Trajectory origin = constant_trajectory(Eigen::Vector2d(0, 0), 2.0, 10);
  Model m;
  m.trajs = {origin};
  m.params_r = {5.0};
  m.quad = kSimpson;
  m.A = Eigen::MatrixXd::Zero(2, 1);
  CHECK(eval_model(m, Eigen::Vector2d(0.3, -2.0)).norm() == 0.0);

  m.A = Eigen::MatrixXd::Ones(1, 1);
  CHECK(eval_model(m, Eigen::Vector2d(1.4, 0.7))(0) == doctest::Approx(2.0).epsilon(1e-12));

  Eigen::VectorXd x3(3);
  x3.setZero();
  CHECK_THROWS_AS(eval_model(m, x3), InputError);
}

TEST_CASE("singular triples of simple grams") {
  GramPack pack = spiral_pack();
  pack.G_r = Eigen::MatrixXd::Identity(pack.M, pack.M);
  for (const auto& triple : singular_triples(pack)) CHECK(triple.sigma == 1.0);

  pack = spiral_pack();
  pack.M = 2;
  pack.n = 2;
  pack.trajs.resize(2);
  pack.D = pack.D.leftCols(2).eval();
  pack.G_d = pack.G_d.topLeftCorner(2, 2).eval();
  pack.G_r = Eigen::Vector2d(4.0, 1.0).asDiagonal();
  const auto triples = singular_triples(pack);
  REQUIRE(triples.size() == 2);
  CHECK(triples[0].sigma == 1.0);
  CHECK(triples[1].sigma == 0.25);
}

TEST_CASE("duplicate trajectories produce exactly one zero singular value") {
  GramPack pack = spiral_pack();
  std::vector<Trajectory> dup = pack.trajs;
  dup.push_back(dup.front());
  pack = build_gram_pack(std::move(dup), {1.0}, {1.0}, kSimpson);

  const auto triples = singular_triples(pack);
  Eigen::Index zeros = 0;
  for (const auto& triple : triples)
    if (triple.sigma == 0.0) ++zeros;

  // Independent rank count through an eigendecomposition of G_r.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(pack.G_r);
  REQUIRE(eig.info() == Eigen::Success);
  const double cutoff = std::numeric_limits<double>::epsilon() *
                        static_cast<double>(pack.M) * eig.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::Index eig_rank = 0;
  for (Eigen::Index i = 0; i < pack.M; ++i)
    if (std::abs(eig.eigenvalues()(i)) > cutoff) ++eig_rank;

  CHECK(zeros == pack.M - eig_rank);
  CHECK(zeros == 1);
}

TEST_CASE("singular function evaluation") {
  const GramPack pack = spiral_pack();
  const auto triples = singular_triples(pack);

  SingularTriple null = triples[0];
  null.v.setZero();
  null.w.setZero();
  CHECK(eval_singular_function(pack, null, FunctionSide::left, Eigen::Vector2d(0.3, 1.0)) == 0.0);
  CHECK(eval_singular_function(pack, null, FunctionSide::right, Eigen::Vector2d(0.3, 1.0)) == 0.0);

  // One closed trajectory: the kernel difference vanishes identically.
  Trajectory closed = constant_trajectory(Eigen::Vector2d(0.7, -0.1), 1.0, 10);
  const GramPack closed_pack = build_gram_pack({closed}, {5.0}, {5.0}, kSimpson);
  SingularTriple lone = singular_triples(closed_pack)[0];
  lone.v.setConstant(1.0);
  CHECK(eval_singular_function(closed_pack, lone, FunctionSide::left,
                               Eigen::Vector2d(0.2, 0.2)) == 0.0);

  // The right side is the plain weighted sum of occupation evaluations.
  const Eigen::Vector2d x(0.4, -0.9);
  double want = 0.0;
  for (Eigen::Index j = 0; j < pack.M; ++j)
    want += triples[1].w(j) * occupation_eval(pack.trajs[j], x, pack.params_r, pack.quad);
  CHECK(eval_singular_function(pack, triples[1], FunctionSide::right, x) == want);

  CHECK_THROWS_AS(
      eval_singular_function(pack, triples[0], FunctionSide::right, Eigen::VectorXd::Zero(3)),
      InputError);
}

TEST_CASE("modes factor the sldmd coefficients") {
  GramPack pack = spiral_pack();
  GramPack zero_d = pack;
  zero_d.D.setZero();
  CHECK(extract_modes(zero_d).norm() == 0.0);

  const Eigen::MatrixXd xi = extract_modes(pack);
  const PinvResult pv = pinv_svd(pack.G_r);
  const Eigen::MatrixXd rebuilt = xi * pv.svd.Sigma.asDiagonal() * pv.svd.W.transpose();
  CHECK(rel_fro(rebuilt, fit_sldmd(pack).A) <= 1e-10);
}

TEST_CASE("flow prediction") {
  // Zero model: the state never moves.
  Model still;
  still.trajs = {constant_trajectory(Eigen::Vector2d(0, 0), 1.0, 4)};
  still.params_r = {5.0};
  still.quad = kSimpson;
  still.A = Eigen::MatrixXd::Zero(2, 1);
  const Trajectory parked = predict_flow(still, Eigen::Vector2d(1.0, -2.0), 1.0, 0.1);
  for (Eigen::Index k = 0; k < parked.samples(); ++k) {
    CHECK(parked.states(k, 0) == 1.0);
    CHECK(parked.states(k, 1) == -2.0);
  }

  // Model fitted on x' = -x reproduces the exponential decay.
  DatasetSpec spec;
  spec.system = linear_decay_system(1);
  spec.grid_min = Eigen::VectorXd::Constant(1, -1.0);
  spec.grid_max = Eigen::VectorXd::Constant(1, 1.0);
  spec.grid_counts = {10};
  const Model decay = fit_sldmd(build_gram_pack(generate_dataset(spec), {1.0}, {1.0}, kSimpson));
  const Trajectory flow = predict_flow(decay, Eigen::VectorXd::Constant(1, 0.8), 1.0, 0.01);
  const double got = flow.states(flow.samples() - 1, 0);
  CHECK(std::abs(got - 0.8 * std::exp(-1.0)) <= 2e-2 * 0.8 * std::exp(-1.0));

  // An exploding fitted field reports divergence instead of emitting NaNs.
  Model hot;
  Eigen::VectorXd one(1);
  one << 1.0;
  hot.trajs = {constant_trajectory(one, 1.0, 4)};
  hot.params_r = {1.0};
  hot.quad = kSimpson;
  hot.A = Eigen::MatrixXd::Constant(1, 1, 1e3);
  CHECK_THROWS_AS(predict_flow(hot, one, 10.0, 0.1), DivergenceError);
}

TEST_CASE("fitted model keeps the oscillator energy bounded") {
  const GramPack pack = duffing_pack(7, 5.0);
  const Model m = fit_sldmd(pack);
  const Trajectory orbit = predict_flow(m, Eigen::Vector2d(1.0, 0.0), 10.0, 0.01);
  auto energy = [](double x1, double x2) {
    return x2 * x2 / 2 - x1 * x1 / 2 + x1 * x1 * x1 * x1 / 4;
  };
  const double H0 = energy(orbit.states(0, 0), orbit.states(0, 1));
  double drift = 0.0;
  for (Eigen::Index k = 0; k < orbit.samples(); ++k)
    drift = std::max(drift,
                     std::abs(energy(orbit.states(k, 0), orbit.states(k, 1)) - H0));
  CHECK(drift <= 0.1);
}
