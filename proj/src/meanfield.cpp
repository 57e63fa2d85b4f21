#include "cqsim/meanfield.hpp"

#include <cmath>
#include <cstdlib>

#include "cqsim/errors.hpp"

namespace cqsim {

TrajectoryState step_meanfield(const TrajectoryState& state, const ModelParams& params,
                               double dt) {
    params.validate();
    if (dt < 0.0) throw ConfigError("step size must be >= 0");

    const Observable& a = params.coupling;
    TrajectoryState next;
    next.t = state.t + dt;
    next.p = state.p - params.lambda * expectation(a.matrix(), state.rho) * dt;

    // Exact unitary flow: in the coupling eigenbasis only the off-diagonal
    // component moves, by the phase of the eigenvalue gap.
    const ComplexMat2& e = a.eigenbasis();
    ComplexMat2 r = e.adjoint() * state.rho * e;
    const double angle = -params.lambda * params.q * (a.a0() - a.a1()) * dt / params.hbar;
    const cplx phase(std::cos(angle), std::sin(angle));
    r.m01 *= phase;
    r.m10 *= std::conj(phase);
    next.rho = e * r * e.adjoint();
    return next;
}

std::vector<TrajectoryState> run_meanfield(const InitialCondition& init,
                                           const ModelParams& params, double t_final,
                                           double dt) {
    params.validate();
    init.validate();
    if (t_final < 0.0) throw ConfigError("t_final must be >= 0");
    if (dt <= 0.0) throw ConfigError("dt must be > 0");
    const double steps_exact = t_final / dt;
    const long long n_steps = std::llround(steps_exact);
    if (std::abs(n_steps * dt - t_final) > 1e-9 * std::max(1.0, std::abs(t_final))) {
        throw ConfigError("t_final must be an integer multiple of dt");
    }

    std::vector<TrajectoryState> path;
    path.reserve(static_cast<std::size_t>(n_steps) + 1);
    TrajectoryState s{0.0, init.p0, init.rho0.matrix()};
    path.push_back(s);
    for (long long k = 1; k <= n_steps; ++k) {
        s = step_meanfield(s, params, dt);
        s.t = k * dt;  // keep recorded times grid-exact
        path.push_back(s);
    }
    return path;
}

}  // namespace cqsim
