// Command-line front end: dataset generation, model fitting, regularization
// sweeps, prediction, and mode extraction on top of the okdmd core library.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "okdmd/dynamics.hpp"
#include "okdmd/errors.hpp"
#include "okdmd/estimators.hpp"
#include "okdmd/gram.hpp"
#include "okdmd/io.hpp"
#include "okdmd/pinv.hpp"
#include "okdmd/sweep.hpp"
#include "okdmd/trajectory.hpp"

namespace {

using Cfg = std::map<std::string, std::string>;

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double to_double(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double parsed = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw okdmd::InputError("value for '" + key + "' is not a number: '" + value + "'");
  return parsed;
}

long to_long(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const long parsed = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw okdmd::InputError("value for '" + key + "' is not an integer: '" + value + "'");
  return parsed;
}

std::string cfg_str(const Cfg& cfg, const std::string& key, const std::string& fallback) {
  const auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

std::string cfg_require(const Cfg& cfg, const std::string& key, const std::string& hint) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) throw okdmd::InputError(hint);
  return it->second;
}

double cfg_double(const Cfg& cfg, const std::string& key, double fallback) {
  const auto it = cfg.find(key);
  return it == cfg.end() ? fallback : to_double(key, it->second);
}

std::optional<double> cfg_double_opt(const Cfg& cfg, const std::string& key) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return std::nullopt;
  return to_double(key, it->second);
}

std::uint64_t cfg_u64(const Cfg& cfg, const std::string& key, std::uint64_t fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  const long parsed = to_long(key, it->second);
  if (parsed < 0) throw okdmd::InputError("value for '" + key + "' must be nonnegative");
  return static_cast<std::uint64_t>(parsed);
}

int cfg_int(const Cfg& cfg, const std::string& key, int fallback) {
  const auto it = cfg.find(key);
  return it == cfg.end() ? fallback : static_cast<int>(to_long(key, it->second));
}

Eigen::VectorXd cfg_vector(const Cfg& cfg, const std::string& key,
                           const Eigen::VectorXd& fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  const std::vector<std::string> tokens = split_tokens(it->second);
  Eigen::VectorXd out(static_cast<Eigen::Index>(tokens.size()));
  for (std::size_t i = 0; i < tokens.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = to_double(key, tokens[i]);
  return out;
}

std::vector<int> cfg_ints(const Cfg& cfg, const std::string& key,
                          const std::vector<int>& fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  std::vector<int> out;
  for (const auto& token : split_tokens(it->second))
    out.push_back(static_cast<int>(to_long(key, token)));
  return out;
}

okdmd::QuadratureSpec cfg_quad(const Cfg& cfg) {
  const std::string name = cfg_str(cfg, "quad", "simpson");
  if (name == "simpson") return {okdmd::QuadRule::simpson};
  if (name == "trapezoid") return {okdmd::QuadRule::trapezoid};
  throw okdmd::InputError("unknown quadrature rule '" + name +
                          "' (expected simpson or trapezoid)");
}

std::string join17(const Eigen::VectorXd& values) {
  std::string out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += okdmd::fmt17(values(i));
  }
  return out;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(values[i]);
  }
  return out;
}

okdmd::DatasetSpec dataset_spec_from(const Cfg& cfg) {
  okdmd::DatasetSpec spec;
  spec.system = okdmd::find_system(cfg_str(cfg, "system", "duffing"));
  Eigen::VectorXd def_min(2), def_max(2);
  def_min << -3.0, -3.0;
  def_max << 3.0, 3.0;
  spec.grid_min = cfg_vector(cfg, "grid_min", def_min);
  spec.grid_max = cfg_vector(cfg, "grid_max", def_max);
  spec.grid_counts = cfg_ints(cfg, "grid_counts", {13, 13});
  spec.duration = cfg_double(cfg, "duration", 1.0);
  spec.dt = cfg_double(cfg, "dt", 0.01);
  spec.noise_std = cfg_double(cfg, "noise_std", 0.0);
  spec.seed = cfg_u64(cfg, "seed", 0);
  return spec;
}

Cfg generation_meta(const okdmd::DatasetSpec& spec) {
  Cfg meta;
  meta["system"] = spec.system.name;
  meta["grid_min"] = join17(spec.grid_min);
  meta["grid_max"] = join17(spec.grid_max);
  meta["grid_counts"] = join_ints(spec.grid_counts);
  meta["duration"] = okdmd::fmt17(spec.duration);
  meta["dt"] = okdmd::fmt17(spec.dt);
  meta["noise_std"] = okdmd::fmt17(spec.noise_std);
  meta["seed"] = std::to_string(spec.seed);
  return meta;
}

// A dataset comes either from a manifest on disk or from inline generation.
std::vector<okdmd::Trajectory> resolve_dataset(const Cfg& cfg, Cfg* meta_out) {
  const auto it = cfg.find("dataset");
  if (it != cfg.end()) {
    if (meta_out) *meta_out = okdmd::read_dataset_manifest(it->second).meta;
    return okdmd::read_trajectories(it->second);
  }
  const okdmd::DatasetSpec spec = dataset_spec_from(cfg);
  if (meta_out) *meta_out = generation_meta(spec);
  return okdmd::generate_dataset(spec);
}

okdmd::OdeSystem resolve_system(const Cfg& cfg, const Cfg& meta) {
  if (cfg.count("system")) return okdmd::find_system(cfg.at("system"));
  if (meta.count("system")) return okdmd::find_system(meta.at("system"));
  return okdmd::find_system("duffing");
}

okdmd::EvalGrid eval_grid_from(const Cfg& cfg) {
  okdmd::EvalGrid grid;
  Eigen::VectorXd def_min(2), def_max(2);
  def_min << -3.0, -3.0;
  def_max << 3.0, 3.0;
  grid.min = cfg_vector(cfg, "eval_min", def_min);
  grid.max = cfg_vector(cfg, "eval_max", def_max);
  grid.counts = cfg_ints(cfg, "eval_counts", {61, 61});
  return grid;
}

std::vector<double> lambda_grid_from(const Cfg& cfg) {
  if (cfg.count("lambda")) return {to_double("lambda", cfg.at("lambda"))};
  if (!cfg.count("lambda_min") && !cfg.count("lambda_max") && !cfg.count("lambda_count"))
    return okdmd::default_lambda_grid();
  const double lo = cfg_double(cfg, "lambda_min", 1e-10);
  const double hi = cfg_double(cfg, "lambda_max", 1e4);
  const int count = cfg_int(cfg, "lambda_count", 25);
  if (!(lo > 0.0) || !(hi > 0.0) || count < 1)
    throw okdmd::InputError("lambda grid needs positive bounds and a positive count");
  std::vector<double> lambdas(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    lambdas[static_cast<std::size_t>(k)] =
        count == 1 ? lo
                   : std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * k /
                                                         (count - 1));
  return lambdas;
}

okdmd::GramPack pack_from(const Cfg& cfg, std::vector<okdmd::Trajectory> trajs) {
  const okdmd::KernelParams params_d{cfg_double(cfg, "mu_d", 5.0)};
  const okdmd::KernelParams params_r{cfg_double(cfg, "mu_r", 5.0)};
  return okdmd::build_gram_pack(std::move(trajs), params_d, params_r, cfg_quad(cfg));
}

int run_generate(const Cfg& cfg) {
  const okdmd::DatasetSpec spec = dataset_spec_from(cfg);
  const std::vector<okdmd::Trajectory> trajs = okdmd::generate_dataset(spec);
  const std::string out = cfg_str(cfg, "out", "dataset.txt");
  okdmd::write_trajectories(trajs, generation_meta(spec), out);
  std::cout << "wrote " << out << ": " << trajs.size() << " trajectories of "
            << trajs.front().dim() << " states\n";
  return 0;
}

int run_fit(const Cfg& cfg) {
  const okdmd::GramPack pack = pack_from(cfg, resolve_dataset(cfg, nullptr));
  const std::string method = cfg_str(cfg, "method", "sldmd");
  okdmd::Model model;
  if (method == "sldmd") {
    model = okdmd::fit_sldmd(pack, cfg_double_opt(cfg, "cutoff"));
  } else if (method == "okr") {
    model = okdmd::fit_okr(
        pack, to_double("lambda", cfg_require(cfg, "lambda",
                                              "okr fitting needs a regularization value "
                                              "(--lambda or config key 'lambda')")));
  } else {
    throw okdmd::InputError("unknown method '" + method + "' (expected sldmd or okr)");
  }
  const std::string out = cfg_str(cfg, "out", "model.txt");
  okdmd::save_model(model, out);
  std::cout << "wrote " << out << ": " << method << " model over " << pack.M
            << " trajectories\n";
  return 0;
}

int run_sweep(const Cfg& cfg) {
  Cfg meta;
  const std::vector<okdmd::Trajectory> trajs = resolve_dataset(cfg, &meta);
  const okdmd::KernelParams params_d{cfg_double(cfg, "mu_d", 5.0)};
  const okdmd::KernelParams params_r{cfg_double(cfg, "mu_r", 5.0)};
  const std::vector<okdmd::SweepRow> rows = okdmd::run_lambda_sweep(
      trajs, params_d, params_r, cfg_quad(cfg), lambda_grid_from(cfg),
      resolve_system(cfg, meta), cfg_int(cfg, "component", 1), eval_grid_from(cfg),
      cfg_double_opt(cfg, "cutoff"));
  const std::string out = cfg_str(cfg, "out", "sweep.dat");
  okdmd::write_dat(rows, out);
  std::cout << "wrote " << out << ": " << rows.size() << " rows\n";
  return 0;
}

int run_predict(const Cfg& cfg) {
  const okdmd::Model model = okdmd::load_model(
      cfg_require(cfg, "model", "predict needs a model file (--model or config key 'model')"));
  const Eigen::VectorXd x0 =
      cfg_vector(cfg, "x0", Eigen::VectorXd::Zero(model.A.rows()));
  const okdmd::Trajectory pred =
      okdmd::predict_flow(model, x0, cfg_double(cfg, "horizon", 10.0),
                          cfg_double(cfg, "predict_dt", 0.01));
  const std::string out = cfg_str(cfg, "out", "prediction.csv");
  okdmd::write_trajectory_csv(pred, out);
  std::cout << "wrote " << out << ": " << pred.samples() << " samples\n";
  return 0;
}

int run_modes(const Cfg& cfg) {
  const okdmd::GramPack pack = pack_from(cfg, resolve_dataset(cfg, nullptr));
  const std::optional<double> cutoff = cfg_double_opt(cfg, "cutoff");
  const std::vector<okdmd::SingularTriple> triples = okdmd::singular_triples(pack, cutoff);
  const Eigen::MatrixXd xi = okdmd::extract_modes(pack, cutoff);

  Eigen::Index rank = 0;
  for (const auto& triple : triples)
    if (triple.sigma > 0.0) ++rank;
  const Eigen::Index count = std::min<Eigen::Index>(rank, 6);

  const okdmd::EvalGrid grid = eval_grid_from(cfg);
  const Eigen::MatrixXd points = okdmd::grid_points(grid);
  const Eigen::MatrixXd R =
      okdmd::occupation_feature_matrix(pack.trajs, points, pack.params_r, pack.quad);

  // Kernel differences of every trajectory at every node, assembled the same
  // way as the feature matrix so the singular functions come out as plain
  // matrix products.
  Eigen::MatrixXd starts(pack.M, pack.n), ends(pack.M, pack.n);
  for (Eigen::Index j = 0; j < pack.M; ++j) {
    starts.row(j) = pack.trajs[static_cast<std::size_t>(j)].start().transpose();
    ends.row(j) = pack.trajs[static_cast<std::size_t>(j)].end().transpose();
  }
  const Eigen::MatrixXd diffs =
      ((ends * points.transpose()) / pack.params_d.mu).array().exp().matrix() -
      ((starts * points.transpose()) / pack.params_d.mu).array().exp().matrix();

  const std::string out = cfg_str(cfg, "out", "modes.txt");
  std::ofstream file(out);
  if (!file) throw okdmd::InputError("cannot open '" + out + "' for writing");
  file << "n " << pack.n << "\n";
  file << "M " << pack.M << "\n";
  file << "rank " << rank << "\n";
  file << "count " << count << "\n";
  file << "sigma\n";
  for (Eigen::Index i = 0; i < count; ++i)
    file << okdmd::fmt17(triples[static_cast<std::size_t>(i)].sigma) << "\n";
  file << "modes\n";
  for (Eigen::Index r = 0; r < pack.n; ++r) {
    for (Eigen::Index i = 0; i < count; ++i) {
      if (i) file << " ";
      file << okdmd::fmt17(xi(r, i));
    }
    file << "\n";
  }
  file << "functions\n";
  file << "#";
  for (Eigen::Index c = 0; c < pack.n; ++c) file << " x" << (c + 1);
  for (Eigen::Index i = 0; i < count; ++i) file << " phi" << (i + 1);
  for (Eigen::Index i = 0; i < count; ++i) file << " psi" << (i + 1);
  file << "\n";
  for (Eigen::Index p = 0; p < points.rows(); ++p) {
    for (Eigen::Index c = 0; c < pack.n; ++c) {
      if (c) file << " ";
      file << okdmd::fmt17(points(p, c));
    }
    for (Eigen::Index i = 0; i < count; ++i)
      file << " "
           << okdmd::fmt17(triples[static_cast<std::size_t>(i)].v.dot(diffs.col(p)));
    for (Eigen::Index i = 0; i < count; ++i)
      file << " " << okdmd::fmt17(triples[static_cast<std::size_t>(i)].w.dot(R.col(p)));
    file << "\n";
  }
  file.flush();
  if (!file) throw okdmd::InputError("write to '" + out + "' failed");
  std::cout << "wrote " << out << ": " << count << " singular triples over "
            << points.rows() << " grid nodes\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occupation-kernel dynamic mode decomposition"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, quad, method, out, model_path, x0;
  std::uint64_t seed = 0;
  double mu_d = 0, mu_r = 0, lambda = 0, cutoff = 0, horizon = 0, dt = 0;

  auto* opt_config = app.add_option("--config", config_path, "config file (flat key value)");
  auto* opt_seed = app.add_option("--seed", seed, "noise seed");
  auto* opt_mu_d = app.add_option("--mu-d", mu_d, "kernel scale for the difference side");
  auto* opt_mu_r = app.add_option("--mu-r", mu_r, "kernel scale for the occupation side");
  auto* opt_lambda = app.add_option("--lambda", lambda, "regularization value");
  auto* opt_cutoff = app.add_option("--cutoff", cutoff, "relative singular value cutoff");
  auto* opt_quad = app.add_option("--quad", quad, "quadrature rule")
                       ->check(CLI::IsMember({"simpson", "trapezoid"}));
  auto* opt_out = app.add_option("--out", out, "output file");

  CLI::App* cmd_generate = app.add_subcommand("generate", "integrate a dataset and write it out");
  CLI::App* cmd_fit = app.add_subcommand("fit", "fit a model and write it out");
  auto* opt_method = cmd_fit->add_option("--method", method, "sldmd or okr")
                         ->check(CLI::IsMember({"sldmd", "okr"}));
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "score fits across a regularization grid");
  CLI::App* cmd_predict = app.add_subcommand("predict", "integrate a fitted model");
  auto* opt_model = cmd_predict->add_option("--model", model_path, "model file");
  auto* opt_x0 = cmd_predict->add_option("--x0", x0, "initial state, comma separated");
  auto* opt_horizon = cmd_predict->add_option("--horizon", horizon, "prediction length");
  auto* opt_dt = cmd_predict->add_option("--dt", dt, "prediction step");
  CLI::App* cmd_modes = app.add_subcommand("modes", "emit singular values, modes, and functions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    Cfg cfg;
    if (opt_config->count()) cfg = okdmd::read_config(config_path);
    if (opt_seed->count()) cfg["seed"] = std::to_string(seed);
    if (opt_mu_d->count()) cfg["mu_d"] = okdmd::fmt17(mu_d);
    if (opt_mu_r->count()) cfg["mu_r"] = okdmd::fmt17(mu_r);
    if (opt_lambda->count()) cfg["lambda"] = okdmd::fmt17(lambda);
    if (opt_cutoff->count()) cfg["cutoff"] = okdmd::fmt17(cutoff);
    if (opt_quad->count()) cfg["quad"] = quad;
    if (opt_out->count()) cfg["out"] = out;
    if (opt_method->count()) cfg["method"] = method;
    if (opt_model->count()) cfg["model"] = model_path;
    if (opt_x0->count()) cfg["x0"] = x0;
    if (opt_horizon->count()) cfg["horizon"] = okdmd::fmt17(horizon);
    if (opt_dt->count()) cfg["predict_dt"] = okdmd::fmt17(dt);

    if (cmd_generate->parsed()) return run_generate(cfg);
    if (cmd_fit->parsed()) return run_fit(cfg);
    if (cmd_sweep->parsed()) return run_sweep(cfg);
    if (cmd_predict->parsed()) return run_predict(cfg);
    if (cmd_modes->parsed()) return run_modes(cfg);
    throw okdmd::InputError("no subcommand given");
  } catch (const okdmd::DivergenceError& e) {
    std::cerr << "error[divergence]: " << e.what() << "\n";
    return 6;
  } catch (const okdmd::RankError& e) {
    std::cerr << "error[rank]: " << e.what() << "\n";
    return 5;
  } catch (const okdmd::SchemaError& e) {
    std::cerr << "error[schema]: " << e.what() << "\n";
    return 4;
  } catch (const okdmd::ParseError& e) {
    std::cerr << "error[parse]: " << e.what() << "\n";
    return 3;
  } catch (const okdmd::InputError& e) {
    std::cerr << "error[input]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
}
