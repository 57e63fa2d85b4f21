#pragma once

#include <string>
#include <vector>

#include "cqsim/model.hpp"
#include "cqsim/unravel.hpp"

namespace cqsim {

// Entries of the coupling observable as written in a config file; the
// conjugate lower-left entry is implied, so the parsed matrix is Hermitian
// by construction.
struct CouplingSpec {
  double a00 = 1.0;
  double a11 = -1.0;
  double a01_re = 0.0;
  double a01_im = 0.0;
};

struct BlochSpec {
  double bx = 1.0;
  double by = 0.0;
  double bz = 0.0;
};

// Snapshot schedule for the field solvers plus the mean-field integrator
// controls (the stochastic ensemble has its own schedule in [sde]).
struct TimesConfig {
  std::vector<double> list = {0.0, 0.5, 1.0, 2.0};
  double dt = 1e-3;
  double t_final = 10.0;
  int record_stride = 100;
};

// Complete run description.  Scalar fields are filled directly by the
// parser; the derived objects (coupling observable, grid, initial qubit
// state) are rebuilt and validated at the end of every apply, so a
// RunConfig in hand is always internally consistent.
struct RunConfig {
  ModelParams model;
  CouplingSpec coupling_matrix;
  double p_min = -20.0;
  double p_max = 20.0;
  int n_points = 1024;
  MomentumGrid grid;
  BlochSpec bloch;
  InitialCondition init;
  EnsembleSpec ensemble;
  TimesConfig times;
  double chi = 10.0;
  int sweep_points = 33;
  int compare_bins = 64;
  bool write_fields = true;
  int write_trajectories = 0;
  double born_threshold = 0.99;
  std::string preset;  // name of the preset this config started from, if any
};

// Parse INI-style text ('#' or ';' comments, [section] headers, key = value)
// into cfg, overlaying the fields that appear and leaving the rest alone.
// Unknown sections or keys, malformed values, and inconsistent results all
// raise ConfigError; messages cite origin and line number where they can.
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin);

// Built-in scenarios, stored as config text and run through the same
// parser.  ConfigError for an unknown name.
RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

// Canonical echo of the full configuration, parseable by apply_config_text;
// rendering, applying to a default RunConfig, and rendering again is the
// identity.  Deterministic: no timestamps, paths, or machine details.
std::string render_config(const RunConfig& cfg);

}  // namespace cqsim
