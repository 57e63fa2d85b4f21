#include "cqsim/oracle.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "cqsim/errors.hpp"

namespace cqsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_sigma_z(const ModelParams& params) {
    const ComplexMat2 d = params.coupling.matrix() - ComplexMat2::pauli_z();
    if (d.max_abs() > 1e-12) {
        throw PreconditionError(
            "reference solution is only available for the sigma_z coupling");
    }
}

void require_gaussian(const InitialCondition& init) {
    if (init.p_dist != MomentumDist::gaussian) {
        throw PreconditionError(
            "reference solution requires a gaussian initial momentum profile");
    }
}

}  // namespace

double gaussian_pdf(double x, double mean, double sigma) {
    const double z = (x - mean) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
}

ComplexMat2 closed_solution(double p, double t, const InitialCondition& init,
                            const ModelParams& params) {
    require_sigma_z(params);
    require_gaussian(init);
    params.validate();
    init.validate();
    if (t < 0.0) throw ConfigError("reference solution requires t >= 0");

    const ComplexMat2 rho0 = init.rho0.matrix();
    const double g_up = gaussian_pdf(p + params.lambda * t, init.p0, init.sigma_p);
    const double g_dn = gaussian_pdf(p - params.lambda * t, init.p0, init.sigma_p);
    const double g_mid = gaussian_pdf(p, init.p0, init.sigma_p);
    const double phase = -2.0 * params.lambda * params.q * t / params.hbar;
    const std::complex<double> coherence =
        std::complex<double>(std::cos(phase), std::sin(phase)) * g_mid;

    ComplexMat2 out;
    out.m00 = rho0.m00 * g_up;
    out.m11 = rho0.m11 * g_dn;
    out.m01 = rho0.m01 * coherence;
    out.m10 = std::conj(rho0.m01 * coherence);
    return out;
}

ComplexMat2 open_solution(double p, double t, const InitialCondition& init,
                          const ModelParams& params) {
    require_sigma_z(params);
    require_gaussian(init);
    params.validate();
    init.validate();
    if (t < 0.0) throw ConfigError("reference solution requires t >= 0");

    const ComplexMat2 rho0 = init.rho0.matrix();
    const double var_t = init.sigma_p * init.sigma_p + 2.0 * params.gamma_c * t;
    const double sigma_t = std::sqrt(var_t);

    // Diagonal packets ride at the eigenvalue-dependent drift.
    const double g_up = gaussian_pdf(p + params.lambda * t, init.p0, sigma_t);
    const double g_dn = gaussian_pdf(p - params.lambda * t, init.p0, sigma_t);

    // Off-diagonal: stationary profile, precession phase, dephasing envelope.
    const double g_mid = gaussian_pdf(p, init.p0, sigma_t);
    const double phase = -2.0 * params.lambda * params.q * t / params.hbar;
    const std::complex<double> coherence =
        std::complex<double>(std::cos(phase), std::sin(phase)) *
        std::exp(-4.0 * params.gamma_q * t) * g_mid;

    ComplexMat2 out;
    out.m00 = rho0.m00 * g_up;
    out.m11 = rho0.m11 * g_dn;
    out.m01 = rho0.m01 * coherence;
    out.m10 = std::conj(rho0.m01 * coherence);
    return out;
}

double drift_diffusion_marginal(double p, double t, double a, const InitialCondition& init,
                                const ModelParams& params) {
    params.validate();
    init.validate();
    if (t < 0.0) throw ConfigError("reference solution requires t >= 0");

    const double mean = init.p0 - params.lambda * a * t;
    double var = 2.0 * params.gamma_c * t;
    if (init.p_dist == MomentumDist::gaussian) var += init.sigma_p * init.sigma_p;

    if (var <= 0.0) {
        // Delta packet that has not spread yet.
        if (p == mean) return std::numeric_limits<double>::infinity();
        return 0.0;
    }
    return gaussian_pdf(p, mean, std::sqrt(var));
}

}  // namespace cqsim
