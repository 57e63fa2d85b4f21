#pragma once

#include <vector>

#include "cqsim/model.hpp"

namespace cqsim {

// Closed (reversible) evolution of the operator-valued momentum field at
// frozen position q:
//
//   d(rho)/dt = -(i/hbar) [lambda q A, rho] + (lambda/2) {A, d(rho)/dp}
//
// In the coupling eigenbasis every matrix component decouples into a scalar
// transport equation, so the propagator is exact: rotate, Fourier transform
// in p, multiply each mode by a phase, transform back.  The only error is
// roundoff plus the spectral representation of the initial profile.
//
// This flow preserves Hermiticity and the trace but NOT pointwise positivity
// of the field: the two diagonal packets separate while the off-diagonal
// component stays put, and the stranded coherence drives the pointwise
// minimum eigenvalue negative.  Tracking that onset is the point of
// negativity_onset below.

// Exact propagation by time t >= 0 (ConfigError otherwise).  The drifted
// packet must stay inside the periodic grid: PreconditionError from the
// boundary guard when it cannot.
WignerField propagate_closed(const WignerField& f, const ModelParams& params, double t);

struct NegativityRecord {
  double t = 0.0;
  double min_eigenvalue = 0.0;
  double p = 0.0;  // grid point where the minimum is attained
};

// Pointwise-minimum eigenvalue of the propagated field at each requested
// time, each propagated in one exact step from the initial field (no error
// compounding across the list).  Delta initial profiles are widened for the
// spectral basis as in pde_initial_field.
std::vector<NegativityRecord> negativity_onset(const InitialCondition& init,
                                               const MomentumGrid& grid,
                                               const ModelParams& params,
                                               const std::vector<double>& times);

}  // namespace cqsim
