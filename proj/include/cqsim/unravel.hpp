#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cqsim/model.hpp"

namespace cqsim {

// Stochastic trajectory picture of the open dynamics.  Each trajectory is a
// pair (p, rho) driven by ONE shared Wiener increment per step:
//
//   dp   = -lambda <A> dt + sqrt(2 gamma_c) dW
//   drho = -(i/hbar) [lambda q A, rho] dt - gamma_q [A, [A, rho]] dt
//          + m ({A, rho} - 2 <A> rho) dW ,      m = -lambda / sqrt(8 gamma_c)
//
// with <A> evaluated at the pre-step state.  The momentum noise and the
// back-action on the qubit are perfectly anti-correlated (m * sqrt(2
// gamma_c) = -lambda/2): a momentum kick upward is evidence for the lower
// coupling eigenvalue, and the qubit state shifts accordingly.  Averaging
// rho over trajectories restores the deterministic dephasing channel at the
// full rate gamma_q; histogramming (p, rho) pairs restores the
// operator-valued momentum field.  At the trade-off saturation point
// gamma_c gamma_q = lambda^2/16 the back-action exactly accounts for all
// dephasing and each individual trajectory stays pure.
//
// The drift coefficient of rho is state-dependent, so plain Euler-Maruyama
// converges weakly but holds per-trajectory purity only to O(sqrt(dt)); the
// Milstein correction (derivative of the noise map applied to itself)
// restores first-order pathwise accuracy and is the engine default.  The
// bare Euler map remains available because its one-step action is the
// simplest statement of the scheme and several tests pin it directly.

enum class SdeScheme { euler, milstein };

// One step of the scheme.  dw is the raw Wiener increment (already scaled
// by sqrt(dt) by the caller).  The stochastic term is constructed exactly
// traceless; with renormalize the result is divided by its trace, otherwise
// the O(dt) roundoff drift in the trace is left visible as a diagnostic.
// PreconditionError when lambda != 0 with gamma_c <= 0 (the back-action
// coefficient diverges); ConfigError on dt < 0.
TrajectoryState step_sde(const TrajectoryState& state, const ModelParams& params, double dt,
                         double dw, SdeScheme scheme = SdeScheme::euler,
                         bool renormalize = true);

// Numerical controls of the per-step map.
struct SdeConfig {
  double dt = 1e-3;
  SdeScheme scheme = SdeScheme::milstein;
  bool renormalize = true;
};

// Full ensemble description.  Trajectory s draws from stream s of the
// counter generator seeded here: counter 0 is reserved for the initial
// momentum draw (reserved even when the delta distribution ignores it) and
// step k consumes counter k + 1, so any subset of trajectories can be
// reproduced in isolation.
struct EnsembleSpec {
  SdeConfig sde;
  double t_final = 10.0;
  int record_stride = 100;  // record every this many steps (plus the final step)
  int n_traj = 4000;
  std::uint64_t seed = 1;
  // A trajectory whose post-step minimum eigenvalue falls below this is
  // flagged and frozen in place (no repair, no further stepping); the
  // remaining record slots repeat the frozen state.  Pick it a safe factor
  // above the scheme's boundary noise scale lambda^2 dt / (8 gamma_c):
  // states riding the purity boundary (as they do wherever measurement
  // wins) wobble below zero by about that much, and a threshold inside the
  // wobble flags healthy trajectories.
  double positivity_abort_threshold = -1e-3;
  // Running below the trade-off line gamma_c gamma_q >= lambda^2/16 is
  // refused unless explicitly allowed (the unraveling is then known to
  // leave the density class; aborts report how fast).
  bool allow_tradeoff_violation = false;

  void validate() const;  // ConfigError on out-of-range fields
};

// Per-trajectory record at one recorded time: momentum plus the Hermitian
// part of the conditional qubit state (diagonals real by construction).
struct StateSnapshot {
  double p = 0.0;
  double r00 = 0.0;
  double r11 = 0.0;
  double re01 = 0.0;
  double im01 = 0.0;
};

struct MeanWithError {
  double mean = 0.0;
  double std_error = 0.0;
};

struct EnsembleResult {
  std::vector<double> times;  // recorded times, ascending, t = 0 first
  // snapshots[time_index][trajectory]
  std::vector<std::vector<StateSnapshot>> snapshots;
  std::vector<std::uint8_t> aborted;  // per-trajectory positivity flag
  int abort_count = 0;
  double min_eig_seen = 0.0;  // most negative eigenvalue seen at any step
  EnsembleSpec spec;
  ModelParams params;
  InitialCondition init;

  // Index of the recorded time matching t within 1e-9 (relative to
  // max(1, |t|)), or -1.
  int index_of_time(double t) const;
  ComplexMat2 rho_at(int time_index, int traj) const;
  // Trajectory average of rho; trace stays ~1, positivity is approximate.
  ComplexMat2 mean_state(int time_index) const;
  // Mean and standard error over trajectories of <A> (trace-normalized).
  MeanWithError coupling_expectation_stats(int time_index) const;
};

// Run the ensemble on n_threads (0 = automatic).  Results are bitwise
// independent of the thread count: trajectories draw from private counter
// streams and are merged in index order.  Guards: PreconditionError when
// lambda != 0 with gamma_c <= 0, or when the trade-off margin is negative
// without allow_tradeoff_violation (with it, a warning goes to stderr and
// the run proceeds); ConfigError when t_final is not an integer multiple
// of dt.
EnsembleResult run_ensemble(const EnsembleSpec& spec, const InitialCondition& init,
                            const ModelParams& params, int n_threads = 0);

// Histogram the recorded (p, rho) pairs at recorded time `at` onto the
// grid: cell j accumulates the states of the trajectories whose momentum
// falls in it, scaled by 1/(n_traj * dp); momenta outside the grid are
// dropped.  No renormalization is applied, so the field integral reports
// the dropped fraction honestly.  ConfigError when `at` is not a recorded
// time.
WignerField reconstruct_field(const EnsembleResult& result, const MomentumGrid& grid,
                              double at);

// Classification of final conditional states by the normalized coordinate
// s = (2 <A> - (a_max + a_min)) / (a_max - a_min), which maps the coupling
// expectation onto [-1, 1]: s > threshold counts toward the larger
// eigenvalue ("up"), s < -threshold toward the smaller ("down"), the rest
// are unresolved.  A gap-less coupling leaves every trajectory unresolved.
struct BornStats {
  double threshold = 0.0;
  int n_up = 0;
  int n_down = 0;
  int n_unresolved = 0;
  double frac_up = 0.0;
  double frac_down = 0.0;
  double frac_unresolved = 0.0;
  std::optional<double> mean_final_p_up;    // empty group -> no value
  std::optional<double> mean_final_p_down;
};

// ConfigError unless threshold is in (0, 1).
BornStats born_statistics(const EnsembleResult& result, double threshold);

}  // namespace cqsim
