#pragma once

#include "cqsim/model.hpp"

namespace cqsim {

// Hand-derived reference solutions for the sigma_z-coupled model with a
// gaussian initial momentum profile.  These are independent of every solver
// in the library on purpose: the test suite judges the solvers against them,
// so they must never be computed by calling the code under test.
//
// In the sigma_z eigenbasis each field component decouples:
//   diagonal aa:  transported profile, value rho_aa(0) * G(p + lambda*a*t)
//   off-diagonal: stationary profile times the precession phase
//                 rho_01(0) * G(p) * exp(-2 i lambda q t / hbar)
// With diffusion and dephasing switched on, every profile relaxes to
// variance sigma^2 + 2*gamma_c*t and the off-diagonal decays by
// exp(-4*gamma_q*t) (the eigenvalue gap of sigma_z is 2).

double gaussian_pdf(double x, double mean, double sigma);

// Field value at (p, t) for the closed dynamics.  PreconditionError unless
// the coupling is sigma_z and the initial momentum profile is gaussian.
ComplexMat2 closed_solution(double p, double t, const InitialCondition& init,
                            const ModelParams& params);

// Same with momentum diffusion gamma_c and dephasing gamma_q included.
ComplexMat2 open_solution(double p, double t, const InitialCondition& init,
                          const ModelParams& params);

// Momentum density of a packet attached to coupling eigenvalue a: drifts at
// rate -lambda*a, diffuses at 2*gamma_c.  Gaussian init contributes sigma_p^2
// to the variance, delta init contributes none (at t = 0 with zero variance
// the delta limit is returned: +infinity at p0, zero elsewhere).
double drift_diffusion_marginal(double p, double t, double a, const InitialCondition& init,
                                const ModelParams& params);

}  // namespace cqsim
