#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace okdmd {

// Error categories. The CLI maps each to a distinct exit code and an
// error[<category>] prefix.

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integration blew up; carries the last finite state so callers can see how
// far the flow got.
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& msg, Eigen::VectorXd state, double time)
      : std::runtime_error(msg), last_state(std::move(state)), last_time(time) {}

  Eigen::VectorXd last_state;
  double last_time = 0.0;
};

}  // namespace okdmd
