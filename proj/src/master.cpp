#include "cqsim/master.hpp"

#include <cmath>
#include <string>

#include "cqsim/errors.hpp"
#include "cqsim/fft.hpp"

namespace cqsim {

namespace {

cplx& component(ComplexMat2& m, int r, int c) {
    if (r == 0) return c == 0 ? m.m00 : m.m01;
    return c == 0 ? m.m10 : m.m11;
}

}  // namespace

WignerField propagate_open(const WignerField& f, const ModelParams& params, double t) {
    params.validate();
    if (t < 0.0) throw ConfigError("propagation time must be >= 0");
    check_propagation_window(f, params, t, 2.0 * params.gamma_c * t);

    // Self-check setup: on or above the positivity trade-off line a positive
    // field must stay positive, so remember whether the input qualifies.
    const double margin =
        params.gamma_c * params.gamma_q - params.lambda * params.lambda / 16.0;
    const bool monitored = margin >= -1e-15 && field_min_eigenvalue(f).value >= -tol::psd_slack;

    const Observable& a = params.coupling;
    WignerField g = conjugate_field(f, a.eigenbasis());
    const int n = g.grid.n;
    const double eig[2] = {a.a0(), a.a1()};

    std::vector<cplx> comp(static_cast<std::size_t>(n));
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            for (int j = 0; j < n; ++j) comp[j] = component(g.values[j], r, c);
            fft(comp, false);
            const double gap = eig[r] - eig[c];
            const double transport = 0.5 * params.lambda * (eig[r] + eig[c]);
            const double precession = -params.lambda * params.q * gap / params.hbar;
            const double dephasing = params.gamma_q * gap * gap;
            for (int k = 0; k < n; ++k) {
                const double u = g.grid.wavenumber(k);
                const double theta = t * (precession + u * transport);
                const double damp = std::exp(-t * (params.gamma_c * u * u + dephasing));
                comp[k] *= damp * cplx(std::cos(theta), std::sin(theta));
            }
            fft(comp, true);
            for (int j = 0; j < n; ++j) component(g.values[j], r, c) = comp[j];
        }
    }

    WignerField out = conjugate_field(g, a.eigenbasis().adjoint());
    hermitize_field(out);

    if (monitored) {
        const FieldMinEig m = field_min_eigenvalue(out);
        if (m.value < -tol::exact_positivity) {
            throw InternalError(
                "positivity self-check failed: trade-off margin " + format_double(margin) +
                " >= 0 but the propagated field has minimum eigenvalue " +
                format_double(m.value) + " at p = " + format_double(m.p));
        }
    }
    return out;
}

std::vector<PositivityRecord> positivity_scan(const InitialCondition& init,
                                              const MomentumGrid& grid,
                                              const ModelParams& params,
                                              const std::vector<double>& times) {
    const WignerField f0 = pde_initial_field(init, grid, params.q);
    std::vector<PositivityRecord> records;
    records.reserve(times.size());
    for (double t : times) {
        const WignerField ft = propagate_open(f0, params, t);
        const FieldMinEig m = field_min_eigenvalue(ft);
        records.push_back({t, m.value, m.p});
    }
    return records;
}

}  // namespace cqsim
