#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cqsim/master.hpp"
#include "cqsim/meanfield.hpp"
#include "cqsim/validity.hpp"
#include "support.hpp"

using namespace cqsim;

TEST_CASE("trade-off margin on reference parameter sets") {
  SUBCASE("exact saturation") {
    ModelParams p;
    p.lambda = 1.0;
    p.gamma_c = 0.25;
    p.gamma_q = 0.25;
    const auto check = check_tradeoff(p);
    CHECK(check.margin == 0.0);
    CHECK(check.satisfied);
    CHECK(check.saturated);
    REQUIRE(check.residual_dephasing.has_value());
    CHECK(*check.residual_dephasing == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  }
  SUBCASE("comfortably satisfied") {
    ModelParams p;
    p.lambda = 1.0;
    p.gamma_c = 1.0;
    p.gamma_q = 1.0;
    const auto check = check_tradeoff(p);
    CHECK(check.margin == doctest::Approx(0.9375).epsilon(1e-14));
    CHECK(check.satisfied);
    CHECK_FALSE(check.saturated);
    CHECK(*check.residual_dephasing == doctest::Approx(1.0 - 0.0625).epsilon(1e-13));
  }
  SUBCASE("violated") {
    ModelParams p;
    p.lambda = 2.0;
    p.gamma_c = 0.25;
    p.gamma_q = 0.1;
    const auto check = check_tradeoff(p);
    CHECK(check.margin == doctest::Approx(-0.225).epsilon(1e-14));
    CHECK_FALSE(check.satisfied);
    CHECK_FALSE(check.saturated);
    // gamma_q - lambda^2/(16 gamma_c) = 0.1 - 1.0
    CHECK(*check.residual_dephasing == doctest::Approx(-0.9).epsilon(1e-13));
  }
  SUBCASE("no diffusion leaves the residual undefined") {
    ModelParams p;
    p.lambda = 0.0;
    p.gamma_c = 0.0;
    p.gamma_q = 0.3;
    const auto check = check_tradeoff(p);
    CHECK(check.margin == 0.0);
    CHECK(check.satisfied);
    CHECK_FALSE(check.residual_dephasing.has_value());
  }
}

TEST_CASE("trade-off margin scales as the square of a drive rescale") {
  // (lambda, gamma_c, gamma_q) -> (s lambda, s^2 gamma_c, gamma_q) rescales
  // the margin by exactly s^2: both sides of the inequality carry the same
  // units.
  ModelParams p;
  p.lambda = 1.0;
  p.gamma_c = 0.2;
  p.gamma_q = 0.3;
  const double base = check_tradeoff(p).margin;
  for (double s : {2.0, 3.0, 0.5}) {
    ModelParams q = p;
    q.lambda = s * p.lambda;
    q.gamma_c = s * s * p.gamma_c;
    const double scaled = check_tradeoff(q).margin;
    CHECK(scaled == doctest::Approx(s * s * base).epsilon(1e-12));
  }
}

TEST_CASE("timescale window on the textbook empty case") {
  // <A>^2 = 0.8, var(A) = 0.2 at chi = 10, lambda = 1, rates 0.25:
  // tau_lower = 10*0.25/0.8 = 3.125 exceeds tau_upper = 1/(10*0.25*0.2) = 2,
  // so no time is simultaneously late enough and early enough.
  ModelParams params;
  params.gamma_c = 0.25;
  params.gamma_q = 0.25;
  const auto rho = QubitDensity::from_bloch(0.0, 0.0, std::sqrt(0.8));
  const auto rep = timescale_window(params, rho, 10.0);

  CHECK(rep.chi == 10.0);
  CHECK(rep.mean_a == doctest::Approx(std::sqrt(0.8)).epsilon(1e-12));
  CHECK(rep.var_a == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_FALSE(rep.lambda_zero);
  REQUIRE(rep.tau_lower.has_value());
  CHECK(*rep.tau_lower == doctest::Approx(3.125).epsilon(1e-12));
  CHECK(rep.tau_upper == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(rep.nonempty);
  CHECK_FALSE(rep.tau_mid.has_value());
  CHECK_FALSE(rep.drift_resolution_ratio.has_value());
}

TEST_CASE("timescale window on a nonempty case") {
  // bz = sqrt(0.19) pure state: <A>^2 = 0.19, var = 0.81.  With gamma_c =
  // 0.05, gamma_q = 0.04: tau_lower = 0.5/0.19 ~ 2.632, tau_upper =
  // 1/(0.4*0.81) ~ 3.086.
  ModelParams params;
  params.gamma_c = 0.05;
  params.gamma_q = 0.04;
  const auto rho = QubitDensity::from_bloch(0.9, 0.0, std::sqrt(0.19));
  // |bloch| = sqrt(0.81 + 0.19) = 1: a pure state.
  const auto rep = timescale_window(params, rho, 10.0);

  REQUIRE(rep.tau_lower.has_value());
  CHECK(*rep.tau_lower == doctest::Approx(0.5 / 0.19).epsilon(1e-12));
  CHECK(rep.tau_upper == doctest::Approx(1.0 / 0.324).epsilon(1e-12));
  CHECK(rep.nonempty);
  REQUIRE(rep.tau_mid.has_value());
  CHECK(*rep.tau_mid == doctest::Approx(0.5 * (0.5 / 0.19 + 1.0 / 0.324)).epsilon(1e-12));
  // Inside the window both diagnostic ratios are at most 1/chi.
  REQUIRE(rep.drift_resolution_ratio.has_value());
  REQUIRE(rep.dephasing_ratio.has_value());
  CHECK(*rep.drift_resolution_ratio <= 0.1 + 1e-12);
  CHECK(*rep.dephasing_ratio <= 0.1 + 1e-12);
}

TEST_CASE("timescale window degenerate branches") {
  ModelParams params;
  params.gamma_c = 0.25;
  params.gamma_q = 0.25;

  SUBCASE("zero coupling expectation leaves tau_lower undefined") {
    const auto rep = timescale_window(params, QubitDensity::plus_state(), 10.0);
    CHECK_FALSE(rep.tau_lower.has_value());
    CHECK_FALSE(rep.nonempty);
    CHECK(rep.tau_upper > 0.0);
  }
  SUBCASE("zero dephasing pushes tau_upper to infinity") {
    params.gamma_q = 0.0;
    const auto rho = QubitDensity::from_bloch(0.6, 0.0, 0.8);
    const auto rep = timescale_window(params, rho, 10.0);
    CHECK(std::isinf(rep.tau_upper));
    CHECK(rep.nonempty);           // [tau_lower, infinity)
    CHECK_FALSE(rep.tau_mid.has_value());  // no finite midpoint
  }
  SUBCASE("eigenstate has zero variance and infinite tau_upper") {
    const auto rep = timescale_window(params, QubitDensity::basis_state(0), 10.0);
    CHECK(rep.var_a == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(std::isinf(rep.tau_upper));
    CHECK(rep.nonempty);
  }
  SUBCASE("lambda = 0 is exact at all times") {
    params.lambda = 0.0;
    const auto rep = timescale_window(params, QubitDensity::plus_state(), 10.0);
    CHECK(rep.lambda_zero);
    REQUIRE(rep.tau_lower.has_value());
    CHECK(*rep.tau_lower == 0.0);
    CHECK(std::isinf(rep.tau_upper));
    CHECK(rep.nonempty);
  }
  SUBCASE("chi must exceed one") {
    CHECK_THROWS_AS(timescale_window(params, QubitDensity::plus_state(), 1.0), ConfigError);
    CHECK_THROWS_AS(timescale_window(params, QubitDensity::plus_state(), 0.5), ConfigError);
  }
}

TEST_CASE("window bounds move the right way with the rates") {
  const auto rho = QubitDensity::from_bloch(0.6, 0.0, 0.8);
  ModelParams params;
  params.gamma_c = 0.1;
  params.gamma_q = 0.1;
  const auto base = timescale_window(params, rho, 10.0);

  ModelParams more_diffusion = params;
  more_diffusion.gamma_c = 0.2;
  const auto a = timescale_window(more_diffusion, rho, 10.0);
  CHECK(*a.tau_lower > *base.tau_lower);  // more noise to average out
  CHECK(a.tau_upper == base.tau_upper);

  ModelParams more_dephasing = params;
  more_dephasing.gamma_q = 0.2;
  const auto b = timescale_window(more_dephasing, rho, 10.0);
  CHECK(b.tau_upper < base.tau_upper);  // decoherence bites sooner
  CHECK(*b.tau_lower == *base.tau_lower);
}

TEST_CASE("bloch-angle sweep") {
  ModelParams params;
  params.gamma_c = 0.25;
  params.gamma_q = 0.25;
  std::vector<double> angles;
  const int n = 9;
  for (int i = 0; i < n; ++i) angles.push_back(3.14159265358979323846 * i / (n - 1));
  const auto rows = window_sweep(params, angles, 10.0);
  REQUIRE(rows.size() == angles.size());

  for (int i = 0; i < n; ++i) {
    CHECK(rows[static_cast<std::size_t>(i)].theta == angles[static_cast<std::size_t>(i)]);
  }
  // theta = 0 is the eigenstate: zero variance, infinite tau_upper.
  CHECK(std::isinf(rows[0].report.tau_upper));
  CHECK(rows[0].report.nonempty);
  // theta = pi/2 sits on the equator: the mean drift vanishes to machine
  // precision and the window is empty (tau_lower is either dropped outright
  // or astronomically far beyond tau_upper, depending on rounding).
  CHECK(std::abs(rows[4].report.mean_a) < 1e-15);
  CHECK_FALSE(rows[4].report.nonempty);
  if (rows[4].report.tau_lower.has_value()) {
    CHECK(*rows[4].report.tau_lower > 1e20);
  }
  // Symmetry about the equator: <A> flips sign, <A>^2 and var match.
  for (int i = 0; i < n; ++i) {
    const auto& lhs = rows[static_cast<std::size_t>(i)].report;
    const auto& rhs = rows[static_cast<std::size_t>(n - 1 - i)].report;
    CHECK(lhs.mean_a == doctest::Approx(-rhs.mean_a).scale(1.0).epsilon(1e-12));
    CHECK(lhs.var_a == doctest::Approx(rhs.var_a).scale(1.0).epsilon(1e-12));
    if (std::isinf(lhs.tau_upper) || std::isinf(rhs.tau_upper)) {
      CHECK(std::isinf(lhs.tau_upper));
      CHECK(std::isinf(rhs.tau_upper));
    } else {
      CHECK(lhs.tau_upper == doctest::Approx(rhs.tau_upper).scale(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("window verdicts agree with a measured mean-field error") {
  // The nonempty scenario above, checked empirically: inside the window the
  // mean-field reduction tracks the exact open dynamics closely; an order
  // of magnitude past tau_upper it has lost the coherence entirely.  The
  // exact qubit marginal dephases as exp(-4 gamma_q t) while mean-field
  // keeps |rho_01| = 0.45 forever, so the trace distance is
  // 0.45 (1 - exp(-4 gamma_q t)).
  ModelParams params;
  params.gamma_c = 0.05;
  params.gamma_q = 0.04;
  InitialCondition init;
  init.rho0 = QubitDensity::from_bloch(0.9, 0.0, std::sqrt(0.19));
  init.sigma_p = 1.0;

  const auto rep = timescale_window(params, init.rho0, 10.0);
  REQUIRE(rep.nonempty);
  const double t_in = 1.543;    // about tau_upper / 2
  const double t_out = 30.864;  // about 10 * tau_upper

  // Wide grid: the drifted packets reach |p| ~ 31 plus diffusion spread.
  const auto grid = MomentumGrid::make(-80.0, 80.0, 4096);
  const auto f0 = product_field(init, grid, 0.0);

  const auto mf = run_meanfield(init, params, t_out, 1e-3);
  const auto mf_in = mf[static_cast<std::size_t>(std::llround(t_in / 1e-3))];
  const auto mf_out = mf.back();

  const double td_in =
      trace_distance(mf_in.rho, qubit_marginal_raw(propagate_open(f0, params, t_in)));
  const double td_out =
      trace_distance(mf_out.rho, qubit_marginal_raw(propagate_open(f0, params, t_out)));

  const auto analytic = [&](double t) { return 0.45 * (1.0 - std::exp(-4.0 * 0.04 * t)); };
  CHECK(td_in == doctest::Approx(analytic(t_in)).epsilon(1e-6));
  CHECK(td_out == doctest::Approx(analytic(t_out)).epsilon(1e-6));
  // The window happens to sit just inside the 0.1 error level here, and the
  // far side is far beyond it.
  CHECK(td_in <= 0.1);
  CHECK(td_out >= 0.3);
}
