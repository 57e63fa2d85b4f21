#include "cqsim/validity.hpp"

#include <cmath>
#include <limits>

#include "cqsim/errors.hpp"

namespace cqsim {

TradeoffCheck check_tradeoff(const ModelParams& params) {
    params.validate();
    TradeoffCheck out;
    const double quadratic = params.lambda * params.lambda / 16.0;
    out.margin = params.gamma_c * params.gamma_q - quadratic;
    const double slack = 1e-12 * std::max(1.0, quadratic);
    out.satisfied = out.margin >= -slack;
    out.saturated = std::abs(out.margin) <= slack;
    if (params.gamma_c > 0.0) {
        out.residual_dephasing = params.gamma_q - quadratic / params.gamma_c;
    }
    return out;
}

ValidityReport timescale_window(const ModelParams& params, const QubitDensity& rho,
                                double chi) {
    params.validate();
    if (!(chi > 1.0)) throw ConfigError("chi must be > 1");

    ValidityReport r;
    r.chi = chi;
    const ComplexMat2& a = params.coupling.matrix();
    r.mean_a = expectation(params.coupling, rho);
    const double mean_sq = expectation(a * a, rho.matrix());
    r.var_a = std::max(0.0, mean_sq - r.mean_a * r.mean_a);

    if (params.lambda == 0.0) {
        r.lambda_zero = true;
        r.tau_lower = 0.0;
        r.tau_upper = std::numeric_limits<double>::infinity();
        r.nonempty = true;
        return r;
    }

    const double drive = params.lambda * params.lambda * r.mean_a * r.mean_a;
    if (r.mean_a != 0.0) r.tau_lower = chi * params.gamma_c / drive;

    const double dephasing = params.gamma_q * r.var_a;
    r.tau_upper = dephasing > 0.0 ? 1.0 / (chi * dephasing)
                                  : std::numeric_limits<double>::infinity();

    r.nonempty = r.tau_lower.has_value() && *r.tau_lower < r.tau_upper;
    if (r.nonempty && std::isfinite(r.tau_upper)) {
        r.tau_mid = 0.5 * (*r.tau_lower + r.tau_upper);
        r.drift_resolution_ratio = params.gamma_c / (drive * *r.tau_mid);
        r.dephasing_ratio = dephasing * *r.tau_mid;
    }
    return r;
}

std::vector<WindowSweepRow> window_sweep(const ModelParams& params,
                                         const std::vector<double>& angles, double chi) {
    std::vector<WindowSweepRow> rows;
    rows.reserve(angles.size());
    for (double theta : angles) {
        const QubitDensity rho =
            QubitDensity::from_bloch(std::sin(theta), 0.0, std::cos(theta));
        rows.push_back({theta, timescale_window(params, rho, chi)});
    }
    return rows;
}

}  // namespace cqsim
