#include "okdmd/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "okdmd/errors.hpp"

namespace okdmd {

OdeSystem duffing_system() {
  OdeSystem sys;
  sys.name = "duffing";
  sys.dim = 2;
  sys.field = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd f(2);
    f(0) = x(1);
    f(1) = x(0) - x(0) * x(0) * x(0);
    return f;
  };
  return sys;
}

OdeSystem linear_decay_system(Eigen::Index dim) {
  if (dim < 1) throw InputError("linear_decay_system: dimension must be >= 1");
  OdeSystem sys;
  sys.name = "linear_decay";
  sys.dim = dim;
  sys.field = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return -x; };
  return sys;
}

OdeSystem spiral_system() {
  OdeSystem sys;
  sys.name = "spiral";
  sys.dim = 2;
  sys.field = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd f(2);
    f(0) = -0.2 * x(0) + 2.0 * x(1);
    f(1) = -2.0 * x(0) - 0.2 * x(1);
    return f;
  };
  return sys;
}

OdeSystem find_system(const std::string& name) {
  if (name == "duffing") return duffing_system();
  if (name == "linear_decay") return linear_decay_system(2);
  if (name == "spiral") return spiral_system();
  throw InputError("unknown system '" + name + "' (expected duffing, linear_decay, or spiral)");
}

Trajectory integrate_rk4(const OdeSystem& system, const Eigen::VectorXd& x0,
                         double duration, double dt) {
  if (!system.field) throw InputError("integrate_rk4: system has no field");
  if (x0.size() != system.dim)
    throw InputError("integrate_rk4: initial state dimension differs from system");
  if (!(duration > 0.0)) throw InputError("integrate_rk4: duration must be positive");
  if (!(dt > 0.0) || dt > duration)
    throw InputError("integrate_rk4: dt must satisfy 0 < dt <= duration");

  const long nfull = static_cast<long>(std::floor(duration / dt + 1e-12));
  const double rem = duration - static_cast<double>(nfull) * dt;
  const bool tail = rem > 1e-12 * duration;
  const long steps = nfull + (tail ? 1 : 0);
  if (steps < 2)
    throw InputError("integrate_rk4: need at least two steps; decrease dt");

  Trajectory traj;
  traj.times.resize(steps + 1);
  traj.states.resize(steps + 1, system.dim);
  Eigen::VectorXd x = x0;
  double t = 0.0;
  traj.times(0) = t;
  traj.states.row(0) = x;

  for (long k = 0; k < steps; ++k) {
    const double h = k < nfull ? dt : rem;
    const Eigen::VectorXd k1 = system.field(x);
    const Eigen::VectorXd k2 = system.field(x + (h / 2.0) * k1);
    const Eigen::VectorXd k3 = system.field(x + (h / 2.0) * k2);
    const Eigen::VectorXd k4 = system.field(x + h * k3);
    x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    if (!x.allFinite()) {
      std::ostringstream msg;
      msg << "integrate_rk4: state of '" << system.name << "' became non-finite at t=" << t;
      throw DivergenceError(msg.str(), traj.states.row(k), traj.times(k));
    }
    traj.times(k + 1) = t;
    traj.states.row(k + 1) = x;
  }
  return traj;
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

double seeded_normal(std::uint64_t seed, std::uint64_t traj, std::uint64_t sample,
                     std::uint64_t comp) {
  const std::uint64_t key =
      splitmix64(splitmix64(splitmix64(splitmix64(seed) ^ traj) ^ sample) ^ comp);
  // Two uniforms in (0,1), then Box-Muller.
  const double u1 = (static_cast<double>(splitmix64(key) >> 11) + 0.5) * 0x1.0p-53;
  const double u2 =
      (static_cast<double>(splitmix64(key ^ 0xD1B54A32D192ED03ull) >> 11) + 0.5) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::MatrixXd grid_points(const EvalGrid& grid) {
  const Eigen::Index n = grid.min.size();
  if (n < 1) throw InputError("grid: dimension must be >= 1");
  if (grid.max.size() != n || static_cast<Eigen::Index>(grid.counts.size()) != n)
    throw InputError("grid: min, max, and counts must have equal dimensions");
  long total = 1;
  for (int c : grid.counts) {
    if (c < 1) throw InputError("grid: counts must be >= 1");
    total *= c;
  }

  Eigen::MatrixXd pts(total, n);
  for (long p = 0; p < total; ++p) {
    long rest = p;
    for (Eigen::Index d = n - 1; d >= 0; --d) {
      const long c = grid.counts[static_cast<std::size_t>(d)];
      const long i = rest % c;
      rest /= c;
      double coord = grid.min(d);
      if (c > 1)
        coord = i == c - 1 ? grid.max(d)
                           : grid.min(d) + static_cast<double>(i) * (grid.max(d) - grid.min(d)) /
                                               static_cast<double>(c - 1);
      pts(p, d) = coord;
    }
  }
  return pts;
}

std::vector<Trajectory> generate_dataset(const DatasetSpec& spec) {
  if (spec.system.dim < 1 || !spec.system.field)
    throw InputError("generate_dataset: spec has no usable system");
  if (spec.grid_min.size() != spec.system.dim || spec.grid_max.size() != spec.system.dim ||
      static_cast<Eigen::Index>(spec.grid_counts.size()) != spec.system.dim)
    throw InputError("generate_dataset: grid dimensions differ from the system dimension");
  if (spec.noise_std < 0.0) throw InputError("generate_dataset: noise_std must be nonnegative");

  const Eigen::MatrixXd ics = grid_points({spec.grid_min, spec.grid_max, spec.grid_counts});
  std::vector<Trajectory> out(static_cast<std::size_t>(ics.rows()));
  for (Eigen::Index p = 0; p < ics.rows(); ++p) {
    try {
      out[static_cast<std::size_t>(p)] =
          integrate_rk4(spec.system, ics.row(p), spec.duration, spec.dt);
    } catch (const DivergenceError& e) {
      std::ostringstream msg;
      msg << "generate_dataset: trajectory from initial condition (";
      for (Eigen::Index d = 0; d < ics.cols(); ++d)
        msg << (d ? ", " : "") << ics(p, d);
      msg << ") diverged: " << e.what();
      throw DivergenceError(msg.str(), e.last_state, e.last_time);
    }
    if (spec.noise_std > 0.0) {
      Trajectory& traj = out[static_cast<std::size_t>(p)];
      for (Eigen::Index k = 0; k < traj.states.rows(); ++k)
        for (Eigen::Index c = 0; c < traj.states.cols(); ++c)
          traj.states(k, c) += spec.noise_std *
                               seeded_normal(spec.seed, static_cast<std::uint64_t>(p),
                                             static_cast<std::uint64_t>(k),
                                             static_cast<std::uint64_t>(c));
    }
  }
  return out;
}

FieldGrid true_field_grid(const OdeSystem& system, const EvalGrid& grid) {
  if (!system.field) throw InputError("true_field_grid: system has no field");
  FieldGrid out;
  out.points = grid_points(grid);
  if (out.points.cols() != system.dim)
    throw InputError("true_field_grid: grid dimension differs from the system dimension");
  out.values.resize(out.points.rows(), system.dim);
  for (Eigen::Index p = 0; p < out.points.rows(); ++p)
    out.values.row(p) = system.field(out.points.row(p));
  return out;
}

}  // namespace okdmd
