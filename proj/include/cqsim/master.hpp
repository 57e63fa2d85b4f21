#pragma once

#include <vector>

#include "cqsim/model.hpp"

namespace cqsim {

// Open-system evolution of the operator-valued momentum field: the closed
// flow plus classical momentum diffusion and qubit dephasing,
//
//   d(rho)/dt = -(i/hbar) [lambda q A, rho] + (lambda/2) {A, d(rho)/dp}
//               + gamma_c d^2(rho)/dp^2 - gamma_q [A, [A, rho]]
//
// Like the closed flow this diagonalizes per matrix component in the
// coupling eigenbasis, so the propagator is again a single exact spectral
// step; the new terms only add a real decay to each mode.
//
// Positivity: the flow maps positive fields to positive fields exactly when
// gamma_c * gamma_q >= lambda^2 / 16 (independent of hbar and of the
// coupling's eigenvalue gap, which cancels between the dephasing rate and
// the packet separation rate).  On or above that line the propagator
// self-checks: a positive input that comes out negative beyond the shared
// monitor tolerance raises InternalError.  Below the line negative outputs
// are the expected physics and are returned as data.
//
// This propagator is deliberately a separate implementation from the
// reversible one rather than a shared kernel with extra flags: at
// gamma_c = gamma_q = 0 the two must agree to roundoff, which the test
// suite uses as a cross-check of both.

WignerField propagate_open(const WignerField& f, const ModelParams& params, double t);

struct PositivityRecord {
  double t = 0.0;
  double min_eigenvalue = 0.0;
  double p = 0.0;  // grid point where the minimum is attained
};

// Pointwise-minimum eigenvalue of the open-system field at each requested
// time, each reached in one exact step from the initial field.
std::vector<PositivityRecord> positivity_scan(const InitialCondition& init,
                                              const MomentumGrid& grid,
                                              const ModelParams& params,
                                              const std::vector<double>& times);

}  // namespace cqsim
