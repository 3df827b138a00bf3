#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "okdmd/trajectory.hpp"

namespace okdmd {

// Ground-truth continuous-time system xdot = f(x).
struct OdeSystem {
  std::string name;
  Eigen::Index dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> field;
};

// Built-in benchmark systems.
OdeSystem duffing_system();               // x1' = x2, x2' = x1 - x1^3
OdeSystem linear_decay_system(Eigen::Index dim);  // x' = -x
OdeSystem spiral_system();                // stable focus, closed-form flow

// Looks up a built-in by name ("duffing", "linear_decay", "spiral"); the
// linear system comes back two-dimensional.
OdeSystem find_system(const std::string& name);

// Generation recipe for one training dataset: trajectories started from a
// uniform grid of initial conditions, optionally corrupted by seeded Gaussian
// measurement noise on every sample.
struct DatasetSpec {
  OdeSystem system;
  Eigen::VectorXd grid_min;
  Eigen::VectorXd grid_max;
  std::vector<int> grid_counts;
  double duration = 1.0;
  double dt = 0.01;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

// Classical fixed-step RK4 sampling both endpoints; the last step is
// shortened when duration is not an integer multiple of dt. Throws
// DivergenceError (carrying the last finite state) if the state leaves the
// representable range.
Trajectory integrate_rk4(const OdeSystem& system, const Eigen::VectorXd& x0,
                         double duration, double dt);

// One trajectory per grid node in row-major order (last axis fastest). Noise
// is drawn per (seed, trajectory, sample, component), so results do not
// depend on scheduling and repeat bit-identically for equal specs.
std::vector<Trajectory> generate_dataset(const DatasetSpec& spec);

// Uniform rectangular evaluation grid.
struct EvalGrid {
  Eigen::VectorXd min;
  Eigen::VectorXd max;
  std::vector<int> counts;
};

// Row-major list of the grid nodes, one per row.
Eigen::MatrixXd grid_points(const EvalGrid& grid);

struct FieldGrid {
  Eigen::MatrixXd points;  // P x n
  Eigen::MatrixXd values;  // P x n, exact field evaluations
};

FieldGrid true_field_grid(const OdeSystem& system, const EvalGrid& grid);

// Deterministic standard normal draw for a (seed, trajectory, sample,
// component) key; splitmix64 bit mixing plus Box-Muller, independent of any
// library RNG so datasets reproduce bit-identically everywhere.
double seeded_normal(std::uint64_t seed, std::uint64_t traj, std::uint64_t sample,
                     std::uint64_t comp);

}  // namespace okdmd
