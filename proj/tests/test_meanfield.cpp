#include <doctest.h>

#include <cmath>
#include <vector>

#include "cqsim/master.hpp"
#include "cqsim/meanfield.hpp"
#include "cqsim/oracle.hpp"
#include "support.hpp"

using namespace cqsim;
using testsup::max_entry_diff;

namespace {

double bloch_x_of(const ComplexMat2& rho) { return 2.0 * rho.m01.real(); }
double bloch_y_of(const ComplexMat2& rho) { return -2.0 * rho.m01.imag(); }
double bloch_z_of(const ComplexMat2& rho) { return rho.m00.real() - rho.m11.real(); }

}  // namespace

TEST_CASE("one step applies the exact phase and the exact drift") {
  ModelParams params;
  params.lambda = 1.2;
  params.hbar = 0.9;
  params.q = 0.7;
  params.coupling = Observable::from_matrix(ComplexMat2::diag(2.0, -0.5));

  TrajectoryState st;
  st.p = 0.3;
  st.rho = QubitDensity::from_bloch(0.4, -0.2, 0.5).matrix();
  const double dt = 0.01;
  const TrajectoryState next = step_meanfield(st, params, dt);

  CHECK(next.t == dt);
  // Drift by the coupling expectation 2 rho00 - 0.5 rho11.
  const double mean_a = 2.0 * st.rho.m00.real() - 0.5 * st.rho.m11.real();
  CHECK(next.p == doctest::Approx(st.p - params.lambda * mean_a * dt).epsilon(1e-15));
  // Populations frozen, coherence rotated by the eigenvalue-gap phase.
  CHECK(next.rho.m00.real() == doctest::Approx(st.rho.m00.real()).epsilon(1e-15));
  CHECK(next.rho.m11.real() == doctest::Approx(st.rho.m11.real()).epsilon(1e-15));
  const double angle = -params.lambda * params.q * 2.5 * dt / params.hbar;
  const cplx expected = st.rho.m01 * cplx(std::cos(angle), std::sin(angle));
  CHECK(std::abs(next.rho.m01 - expected) < 1e-15);
  CHECK(std::abs(next.rho.m10 - std::conj(expected)) < 1e-15);
}

TEST_CASE("coupling expectation is a constant of motion") {
  ModelParams params;
  params.lambda = 0.8;
  params.q = 1.3;
  TrajectoryState st;
  st.p = -1.0;
  st.rho = QubitDensity::from_bloch(0.3, -0.4, 0.5).matrix();
  const double a0 = expectation(params.coupling.matrix(), st.rho);
  double purity0 = purity(st.rho);
  for (int k = 0; k < 1000; ++k) {
    st = step_meanfield(st, params, 1e-3);
    CHECK(expectation(params.coupling.matrix(), st.rho) == doctest::Approx(a0).epsilon(1e-13));
  }
  // The flow is exactly unitary: purity never drifts.
  CHECK(purity(st.rho) == doctest::Approx(purity0).epsilon(1e-12));
  CHECK(st.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("momentum is exactly linear in time") {
  InitialCondition init;
  init.rho0 = QubitDensity::from_bloch(0.0, 0.0, 0.6);  // <sigma_z> = 0.6
  init.p0 = 2.0;
  ModelParams params;
  params.lambda = 1.5;
  params.q = 0.4;
  const auto path = run_meanfield(init, params, 2.0, 1e-3);
  REQUIRE(path.size() == 2001);
  CHECK(path.back().p == doctest::Approx(2.0 - 1.5 * 0.6 * 2.0).epsilon(1e-10));
  // Halfway point too: p is linear, not merely correct at the end.
  CHECK(path[1000].p == doctest::Approx(2.0 - 1.5 * 0.6 * 1.0).epsilon(1e-10));
}

TEST_CASE("recording grid and argument validation") {
  InitialCondition init;
  init.p0 = 0.5;
  ModelParams params;

  const auto path = run_meanfield(init, params, 0.25, 5e-2);
  REQUIRE(path.size() == 6);
  for (std::size_t k = 0; k < path.size(); ++k) {
    CHECK(path[k].t == static_cast<double>(k) * 5e-2);  // grid-exact times
  }
  CHECK(path[0].t == 0.0);
  CHECK(path[0].p == 0.5);
  CHECK(max_entry_diff(path[0].rho, init.rho0.matrix()) == 0.0);

  CHECK_THROWS_AS(run_meanfield(init, params, 0.1005, 1e-3), ConfigError);
  CHECK_THROWS_AS(run_meanfield(init, params, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(run_meanfield(init, params, 1.0, -1e-3), ConfigError);
  CHECK_THROWS_AS(run_meanfield(init, params, -1.0, 1e-3), ConfigError);
  CHECK_THROWS_AS(step_meanfield(TrajectoryState{}, params, -1e-3), ConfigError);
}

TEST_CASE("coupling eigenstates ride along unchanged") {
  // |+> is an eigenstate of a sigma_x coupling: no precession at all, and
  // the momentum drifts at exactly -lambda * (+1).
  InitialCondition init;
  init.rho0 = QubitDensity::plus_state();
  ModelParams params;
  params.lambda = 0.6;
  params.q = 2.0;
  params.coupling = Observable::sigma_x();

  const auto path = run_meanfield(init, params, 1.0, 1e-2);
  CHECK(max_entry_diff(path.back().rho, init.rho0.matrix()) < 1e-13);
  CHECK(path.back().p == doctest::Approx(-0.6).epsilon(1e-12));
}

TEST_CASE("zero position freezes the qubit bitwise") {
  TrajectoryState st;
  st.rho = QubitDensity::from_bloch(0.5, 0.1, -0.3).matrix();
  ModelParams params;
  params.q = 0.0;
  TrajectoryState cur = st;
  for (int k = 0; k < 500; ++k) cur = step_meanfield(cur, params, 1e-3);
  CHECK(max_entry_diff(cur.rho, st.rho) == 0.0);
  // The momentum still drifts: <sigma_z> = -0.3 with lambda = 1.
  CHECK(cur.p == doctest::Approx(0.3 * 0.5).epsilon(1e-12));
}

TEST_CASE("precession matches the closed-form rotation") {
  // sigma_x coupling from |0>: the bloch vector rotates about x, so
  // bz(t) = cos(2 lambda q t / hbar), by(t) = -sin(...), bx = 0.
  InitialCondition init;
  init.rho0 = QubitDensity::basis_state(0);
  ModelParams params;
  params.lambda = 0.9;
  params.hbar = 1.3;
  params.q = 1.1;
  params.coupling = Observable::sigma_x();

  const auto path = run_meanfield(init, params, 0.4, 1e-3);
  const double phi = 2.0 * 0.9 * 1.1 * 0.4 / 1.3;
  const ComplexMat2& rho = path.back().rho;
  CHECK(bloch_z_of(rho) == doctest::Approx(std::cos(phi)).epsilon(1e-12));
  CHECK(bloch_y_of(rho) == doctest::Approx(-std::sin(phi)).scale(1.0).epsilon(1e-12));
  CHECK(bloch_x_of(rho) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  // <sigma_x> stays zero the whole way: conserved and initially zero.
  CHECK(path.back().p == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("failure witness: no momentum spread, no dephasing") {
  // At the trade-off saturation point with a superposition initial state the
  // full dynamics splits the momentum packet (variance sigma^2 + 2 gamma_c t
  // + (lambda t)^2) and dephases the qubit; the mean-field reduction does
  // neither.
  ModelParams params;
  params.lambda = 1.0;
  params.gamma_c = 0.25;
  params.gamma_q = 0.25;
  params.q = 0.0;
  InitialCondition init;  // |+>, gaussian(0, 1)

  const auto grid = MomentumGrid::make(-20.0, 20.0, 1024);
  const auto f0 = product_field(init, grid, params.q);

  SUBCASE("momentum variance at t = 3") {
    const auto moments = marginal_moments(propagate_open(f0, params, 3.0));
    CHECK(moments.variance == doctest::Approx(1.0 + 2.0 * 0.25 * 3.0 + 9.0).epsilon(1e-6));
    CHECK(moments.variance > 8.0);
    // The reduction's "variance" is identically zero: one point.  Its mean
    // momentum does agree with the exact one (both zero here).
    const auto path = run_meanfield(init, params, 3.0, 1e-3);
    CHECK(path.back().p == doctest::Approx(moments.mean).scale(1.0).epsilon(1e-9));
  }
  SUBCASE("qubit trace distance at t = 1") {
    const auto path = run_meanfield(init, params, 1.0, 1e-3);
    const double td =
        trace_distance(path.back().rho, qubit_marginal_raw(propagate_open(f0, params, 1.0)));
    // Exact marginal coherence: 0.5 exp(-4 gamma_q t); mean-field keeps 0.5.
    CHECK(td == doctest::Approx(0.31606027941427884).epsilon(1e-6));
  }
}
