#pragma once

#include <vector>

#include "cqsim/model.hpp"

namespace cqsim {

// Mean-field (semiclassical) reduction: the operator-valued field is
// replaced by one classical momentum paired with one qubit state,
//
//   dp/dt   = -lambda * <A>,
//   d(rho)/dt = -(i/hbar) [lambda q A, rho],
//
// i.e. the particle feels the expectation of the coupling and the qubit
// precesses unitarily at the frozen position.  The open-system rates
// gamma_c and gamma_q do not appear: this reduction has no noise channel
// and keeps the qubit exactly as pure as it started.  That is its
// characteristic failure mode — it tracks the mean momentum correctly
// (since [A, A] = 0 makes <A> a constant of motion, p(t) = p0 - lambda
// <A>(0) t exactly) but carries zero momentum spread and zero decoherence,
// both of which the full dynamics grows.

// One step of size dt >= 0 (ConfigError otherwise).  The step applies the
// exact flow map over dt -- a phase rotation in the coupling eigenbasis and
// a linear momentum drift -- not a finite-difference integrator, so dt
// controls only the recording resolution, not the accuracy.
TrajectoryState step_meanfield(const TrajectoryState& state, const ModelParams& params,
                               double dt);

// Integrate from (init.p0, init.rho0) to t_final, recording every step
// (t = 0 included; t_final must be an integer multiple of dt).  A gaussian
// initial momentum distribution contributes only its mean: the mean-field
// particle is a single point.
std::vector<TrajectoryState> run_meanfield(const InitialCondition& init,
                                           const ModelParams& params, double t_final,
                                           double dt);

}  // namespace cqsim
