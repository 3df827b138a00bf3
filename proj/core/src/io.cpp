#include "okdmd/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "okdmd/errors.hpp"

namespace okdmd {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw InputError("write to '" + path + "' failed");
}

double parse_double(const std::string& token, const std::string& path, int line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ParseError(path + ":" + std::to_string(line) + ": expected a number, got '" + token +
                     "'");
  return value;
}

long parse_count(const std::string& token, const std::string& path, int line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const long value = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0' || value < 0)
    throw ParseError(path + ":" + std::to_string(line) + ": expected a count, got '" + token +
                     "'");
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

// path/to/name.ext -> path/to/name_traj_0007.csv
std::string sibling_csv_name(const std::string& stem, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_traj_%04d.csv", index);
  return stem + buf;
}

std::string path_stem(const std::string& path) {
  fs::path p(path);
  return (p.parent_path() / p.stem()).string();
}

std::string resolve_sibling(const std::string& anchor_path, const std::string& ref) {
  fs::path ref_path(ref);
  if (ref_path.is_absolute()) return ref;
  return (fs::path(anchor_path).parent_path() / ref_path).string();
}

void write_traj_body(std::ofstream& out, const Trajectory& traj) {
  out << "t";
  for (Eigen::Index c = 0; c < traj.dim(); ++c) out << ",x" << (c + 1);
  out << "\n";
  for (Eigen::Index k = 0; k < traj.samples(); ++k) {
    out << fmt17(traj.times(k));
    for (Eigen::Index c = 0; c < traj.dim(); ++c) out << "," << fmt17(traj.states(k, c));
    out << "\n";
  }
}

// Writes trajectories next to `anchor_path` and returns their names relative
// to its directory.
std::vector<std::string> write_sibling_trajectories(const std::vector<Trajectory>& trajs,
                                                    const std::string& anchor_path) {
  const std::string stem = path_stem(anchor_path);
  const std::string base = fs::path(anchor_path).stem().string();
  std::vector<std::string> refs;
  refs.reserve(trajs.size());
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    write_trajectory_csv(trajs[i], sibling_csv_name(stem, static_cast<int>(i)));
    refs.push_back(sibling_csv_name(base, static_cast<int>(i)));
  }
  return refs;
}

std::vector<Trajectory> read_referenced_trajectories(const std::vector<std::string>& refs,
                                                     const std::string& anchor_path) {
  std::vector<Trajectory> trajs;
  trajs.reserve(refs.size());
  for (const auto& ref : refs) trajs.push_back(read_trajectory_csv(resolve_sibling(anchor_path, ref)));
  return trajs;
}

}  // namespace

std::string fmt17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  traj.validate();
  std::ofstream out = open_out(path);
  write_traj_body(out, traj);
  finish_out(out, path);
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ":1: empty file");
  const std::vector<std::string> header = split_csv(strip_cr(line));
  if (header.size() < 2 || header[0] != "t")
    throw SchemaError(path + ":1: expected header t,x1,...,xn");
  for (std::size_t c = 1; c < header.size(); ++c)
    if (header[c] != "x" + std::to_string(c))
      throw SchemaError(path + ":1: expected header t,x1,...,xn");
  const std::size_t ncols = header.size();
  const Eigen::Index dim = static_cast<Eigen::Index>(ncols - 1);

  std::vector<double> times;
  std::vector<double> flat;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != ncols)
      throw SchemaError(path + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(ncols) + " fields, got " + std::to_string(fields.size()));
    const double t = parse_double(fields[0], path, lineno);
    if (!times.empty() && !(t > times.back()))
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": time values must be strictly increasing");
    times.push_back(t);
    for (std::size_t c = 1; c < ncols; ++c) flat.push_back(parse_double(fields[c], path, lineno));
  }
  if (times.size() < 3)
    throw SchemaError(path + ": a trajectory needs at least three samples, got " +
                      std::to_string(times.size()));

  Trajectory traj;
  const Eigen::Index samples = static_cast<Eigen::Index>(times.size());
  traj.times = Eigen::Map<Eigen::VectorXd>(times.data(), samples);
  traj.states =
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          flat.data(), samples, dim);
  return traj;
}

void write_trajectories(const std::vector<Trajectory>& trajs,
                        const std::map<std::string, std::string>& meta,
                        const std::string& manifest_path) {
  if (trajs.empty()) throw InputError("write_trajectories: no trajectories");
  std::map<std::string, std::string> full = meta;
  full["n"] = std::to_string(trajs.front().dim());
  full["M"] = std::to_string(trajs.size());
  const std::vector<std::string> refs = write_sibling_trajectories(trajs, manifest_path);

  std::ofstream out = open_out(manifest_path);
  for (const auto& [key, value] : full) out << key << " " << value << "\n";
  out << "trajectories\n";
  for (const auto& ref : refs) out << ref << "\n";
  finish_out(out, manifest_path);
}

DatasetManifest read_dataset_manifest(const std::string& manifest_path) {
  std::ifstream in = open_in(manifest_path);
  DatasetManifest manifest;
  std::string line;
  int lineno = 0;
  bool in_files = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    if (in_files) {
      manifest.files.push_back(line);
      continue;
    }
    if (line == "trajectories") {
      in_files = true;
      continue;
    }
    const std::size_t space = line.find(' ');
    if (space == std::string::npos)
      throw ParseError(manifest_path + ":" + std::to_string(lineno) +
                       ": expected 'key value', got '" + line + "'");
    manifest.meta[line.substr(0, space)] = line.substr(space + 1);
  }
  if (!in_files)
    throw SchemaError(manifest_path + ": missing 'trajectories' section");
  if (manifest.files.empty())
    throw SchemaError(manifest_path + ": manifest lists no trajectory files");
  return manifest;
}

std::vector<Trajectory> read_trajectories(const std::string& manifest_path) {
  const DatasetManifest manifest = read_dataset_manifest(manifest_path);
  std::vector<Trajectory> trajs = read_referenced_trajectories(manifest.files, manifest_path);
  const auto m_it = manifest.meta.find("M");
  if (m_it != manifest.meta.end() &&
      parse_count(m_it->second, manifest_path, 0) != static_cast<long>(trajs.size()))
    throw SchemaError(manifest_path + ": manifest says M=" + m_it->second + " but lists " +
                      std::to_string(trajs.size()) + " trajectories");
  for (const auto& traj : trajs)
    if (traj.dim() != trajs.front().dim())
      throw SchemaError(manifest_path + ": trajectories have mixed dimensions");
  return trajs;
}

void save_model(const Model& model, const std::string& path) {
  const Eigen::Index n = model.A.rows();
  const Eigen::Index M = model.A.cols();
  if (n == 0 || M == 0) throw InputError("save_model: empty model");
  if (static_cast<Eigen::Index>(model.trajs.size()) != M)
    throw InputError("save_model: trajectory count does not match the coefficient matrix");
  const std::vector<std::string> refs = write_sibling_trajectories(model.trajs, path);

  std::ofstream out = open_out(path);
  out << "method " << (model.method == FitMethod::okr ? "okr" : "sldmd") << "\n";
  out << "lambda " << fmt17(model.lambda) << "\n";
  out << "mu_r " << fmt17(model.params_r.mu) << "\n";
  out << "quad " << (model.quad.rule == QuadRule::trapezoid ? "trapezoid" : "simpson") << "\n";
  out << "n " << n << "\n";
  out << "M " << M << "\n";
  out << "A\n";
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < M; ++c) {
      if (c) out << " ";
      out << fmt17(model.A(r, c));
    }
    out << "\n";
  }
  out << "trajectories\n";
  for (const auto& ref : refs) out << ref << "\n";
  finish_out(out, path);
}

Model load_model(const std::string& path) {
  std::ifstream in = open_in(path);
  std::map<std::string, std::string> head;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    if (line == "A") break;
    const std::size_t space = line.find(' ');
    if (space == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'key value', got '" +
                       line + "'");
    head[line.substr(0, space)] = line.substr(space + 1);
  }
  for (const char* key : {"method", "lambda", "mu_r", "quad", "n", "M"})
    if (!head.count(key)) throw SchemaError(path + ": missing '" + std::string(key) + "' entry");

  Model model;
  if (head["method"] == "sldmd")
    model.method = FitMethod::sldmd;
  else if (head["method"] == "okr")
    model.method = FitMethod::okr;
  else
    throw SchemaError(path + ": unknown method '" + head["method"] + "'");
  model.lambda = parse_double(head["lambda"], path, 0);
  model.params_r.mu = parse_double(head["mu_r"], path, 0);
  if (head["quad"] == "simpson")
    model.quad.rule = QuadRule::simpson;
  else if (head["quad"] == "trapezoid")
    model.quad.rule = QuadRule::trapezoid;
  else
    throw SchemaError(path + ": unknown quadrature rule '" + head["quad"] + "'");
  const long n = parse_count(head["n"], path, 0);
  const long M = parse_count(head["M"], path, 0);
  if (n < 1 || M < 1) throw SchemaError(path + ": n and M must be positive");

  model.A.resize(n, M);
  for (long r = 0; r < n; ++r) {
    // Running out of lines and running into the trajectory section both mean
    // the coefficient block is short.
    const bool have_line = static_cast<bool>(std::getline(in, line));
    if (have_line) line = strip_cr(line);
    if (!have_line || line == "trajectories")
      throw SchemaError(path + ": coefficient matrix ends after " + std::to_string(r) +
                        " of " + std::to_string(n) + " rows");
    ++lineno;
    std::istringstream row(line);
    std::string token;
    for (long c = 0; c < M; ++c) {
      if (!(row >> token))
        throw SchemaError(path + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(M) + " values in a coefficient row");
      model.A(r, c) = parse_double(token, path, lineno);
    }
    std::string extra;
    if (row >> extra)
      throw SchemaError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(M) +
                        " values in a coefficient row, got more");
  }

  std::vector<std::string> refs;
  bool saw_section = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    if (!saw_section) {
      if (line != "trajectories")
        throw SchemaError(path + ":" + std::to_string(lineno) + ": expected 'trajectories'");
      saw_section = true;
      continue;
    }
    refs.push_back(line);
  }
  if (!saw_section) throw SchemaError(path + ": missing 'trajectories' section");
  if (static_cast<long>(refs.size()) != M)
    throw SchemaError(path + ": model lists " + std::to_string(refs.size()) +
                      " trajectories but M=" + std::to_string(M));

  model.trajs = read_referenced_trajectories(refs, path);
  for (const auto& traj : model.trajs)
    if (traj.dim() != n)
      throw SchemaError(path + ": trajectory dimension does not match n=" + std::to_string(n));
  return model;
}

void write_dat(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# lambda okr_err sldmd_err\n";
  for (const auto& row : rows)
    out << fmt17(row.lambda) << " " << fmt17(row.okr_err) << " " << fmt17(row.sldmd_err) << "\n";
  finish_out(out, path);
}

std::vector<SweepRow> read_dat(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<SweepRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, c;
    if (!(fields >> a >> b >> c))
      throw SchemaError(path + ":" + std::to_string(lineno) + ": expected three columns");
    std::string extra;
    if (fields >> extra)
      throw SchemaError(path + ":" + std::to_string(lineno) + ": expected three columns, got more");
    rows.push_back({parse_double(a, path, lineno), parse_double(b, path, lineno),
                    parse_double(c, path, lineno)});
  }
  return rows;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in = open_in(path);
  std::map<std::string, std::string> config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t space = line.find(' ');
    if (space == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'key value', got '" +
                       line + "'");
    config[line.substr(0, space)] = line.substr(space + 1);
  }
  return config;
}

}  // namespace okdmd
