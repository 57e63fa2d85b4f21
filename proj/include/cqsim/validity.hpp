#pragma once

#include <optional>
#include <vector>

#include "cqsim/model.hpp"

namespace cqsim {

// Decoherence-diffusion trade-off.  The open field dynamics preserves
// positivity exactly when
//
//   gamma_c * gamma_q >= lambda^2 / 16 ,
//
// and the stochastic unraveling stays inside the density class under the
// same condition; the margin is the signed distance to that line.  Note
// the coupling's eigenvalue gap cancels (decoherence and packet separation
// both scale with its square), so the margin depends only on the rates.
struct TradeoffCheck {
  double margin = 0.0;     // gamma_c * gamma_q - lambda^2 / 16
  bool satisfied = false;  // margin >= 0 up to roundoff slack
  bool saturated = false;  // margin == 0 up to roundoff slack
  // Dephasing left over after the unraveling back-action accounts for its
  // share: gamma_q - lambda^2 / (16 gamma_c).  This is the rate at which
  // individual trajectories lose purity; zero exactly at saturation.
  // Undefined when gamma_c = 0.
  std::optional<double> residual_dephasing;
};

TradeoffCheck check_tradeoff(const ModelParams& params);

// Mean-field validity window for a given qubit state, from two time scales:
//
//   tau_lower = chi * gamma_c / (lambda^2 <A>^2)   -- below this, diffusion
//     still masks the mean drift the reduction is supposed to track;
//   tau_upper = 1 / (chi * gamma_q * var(A))       -- above this, dephasing
//     the reduction cannot represent dominates.
//
// The window [tau_lower, tau_upper] is nonempty when both make sense and
// the lower end is below the upper.  chi > 1 sets how strict "well inside"
// is; both diagnostic ratios evaluate to 1/chi exactly at the bounds.
struct ValidityReport {
  double chi = 10.0;
  double mean_a = 0.0;  // <A> in the given state
  double var_a = 0.0;   // <A^2> - <A>^2
  // lambda = 0 decouples the sectors entirely: the reduction is exact at
  // all times and the window is [0, infinity) by convention.
  bool lambda_zero = false;
  // Undefined when <A> = 0 (no mean drift to resolve, so no finite time
  // ever satisfies the drift-resolution requirement).
  std::optional<double> tau_lower;
  // +infinity when gamma_q * var(A) = 0 (nothing dephases).
  double tau_upper = 0.0;
  bool nonempty = false;
  // Arithmetic midpoint of a nonempty window with a finite upper end;
  // the natural single time at which to compare the reduction against the
  // full dynamics.
  std::optional<double> tau_mid;
  // At tau_mid: gamma_c / (lambda^2 tau <A>^2) and gamma_q * var(A) * tau.
  // Both are <= 1/chi inside the window.
  std::optional<double> drift_resolution_ratio;
  std::optional<double> dephasing_ratio;
};

// ConfigError unless chi > 1.
ValidityReport timescale_window(const ModelParams& params, const QubitDensity& rho,
                                double chi = 10.0);

// Window as a function of polar angle on the Bloch sphere: theta -> pure
// state with bloch vector (sin theta, 0, cos theta).
struct WindowSweepRow {
  double theta = 0.0;
  ValidityReport report;
};

std::vector<WindowSweepRow> window_sweep(const ModelParams& params,
                                         const std::vector<double>& angles,
                                         double chi = 10.0);

}  // namespace cqsim
