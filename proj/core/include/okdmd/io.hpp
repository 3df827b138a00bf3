#pragma once

#include <map>
#include <string>
#include <vector>

#include "okdmd/estimators.hpp"
#include "okdmd/sweep.hpp"
#include "okdmd/trajectory.hpp"

namespace okdmd {

// Shortest decimal form that round-trips a double exactly.
std::string fmt17(double value);

// Single trajectory as CSV with header t,x1,...,xn.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_csv(const std::string& path);

// A dataset on disk is one manifest plus one CSV per trajectory. The manifest
// holds key/value metadata (generation parameters, n, M) followed by the list
// of CSV files, relative to the manifest's directory.
struct DatasetManifest {
  std::map<std::string, std::string> meta;
  std::vector<std::string> files;
};

// Writes the manifest at `manifest_path` and the trajectories as sibling
// files <stem>_traj_0000.csv, <stem>_traj_0001.csv, ... The n and M keys are
// filled in from the data; everything else comes from `meta`.
void write_trajectories(const std::vector<Trajectory>& trajs,
                        const std::map<std::string, std::string>& meta,
                        const std::string& manifest_path);
std::vector<Trajectory> read_trajectories(const std::string& manifest_path);
DatasetManifest read_dataset_manifest(const std::string& manifest_path);

// Model file: method, lambda, mu_r, quad, n, M, the coefficient matrix row by
// row, then references to the training trajectory CSVs (written as siblings,
// like a dataset).
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

// Sweep table: '#'-prefixed header, then one "lambda okr_err sldmd_err" row
// per line.
void write_dat(const std::vector<SweepRow>& rows, const std::string& path);
std::vector<SweepRow> read_dat(const std::string& path);

// Flat key/value config: first token is the key, the rest of the line is the
// value; '#' comments and blank lines are skipped; later keys win.
std::map<std::string, std::string> read_config(const std::string& path);

}  // namespace okdmd
