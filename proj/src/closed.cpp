#include "cqsim/closed.hpp"

#include <cmath>

#include "cqsim/errors.hpp"
#include "cqsim/fft.hpp"

namespace cqsim {

namespace {

cplx& element(ComplexMat2& m, int r, int c) {
    if (r == 0) return c == 0 ? m.m00 : m.m01;
    return c == 0 ? m.m10 : m.m11;
}

}  // namespace

WignerField propagate_closed(const WignerField& f, const ModelParams& params, double t) {
    params.validate();
    if (t < 0.0) throw ConfigError("propagation time must be >= 0");
    check_propagation_window(f, params, t, 0.0);

    const Observable& a = params.coupling;
    // In the coupling eigenbasis the generator acts on each matrix component
    // independently: component (r, c) picks up the precession phase
    // -lambda*q*(e_r - e_c)/hbar and is transported at rate
    // lambda*(e_r + e_c)/2, which in Fourier space is the mode-k phase
    // u_k * lambda * (e_r + e_c)/2.
    WignerField g = conjugate_field(f, a.eigenbasis());
    const int n = g.grid.n;
    const double eig[2] = {a.a0(), a.a1()};

    std::vector<cplx> comp(static_cast<std::size_t>(n));
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            for (int j = 0; j < n; ++j) comp[j] = element(g.values[j], r, c);
            fft(comp, false);
            const double transport = 0.5 * params.lambda * (eig[r] + eig[c]);
            const double precession =
                -params.lambda * params.q * (eig[r] - eig[c]) / params.hbar;
            for (int k = 0; k < n; ++k) {
                const double theta = t * (precession + g.grid.wavenumber(k) * transport);
                comp[k] *= cplx(std::cos(theta), std::sin(theta));
            }
            fft(comp, true);
            for (int j = 0; j < n; ++j) element(g.values[j], r, c) = comp[j];
        }
    }

    WignerField out = conjugate_field(g, a.eigenbasis().adjoint());
    // The Nyquist mode has no conjugate partner, so its roundoff is
    // one-sided; restore exact pointwise Hermiticity.
    hermitize_field(out);
    return out;
}

std::vector<NegativityRecord> negativity_onset(const InitialCondition& init,
                                               const MomentumGrid& grid,
                                               const ModelParams& params,
                                               const std::vector<double>& times) {
    const WignerField f0 = pde_initial_field(init, grid, params.q);
    std::vector<NegativityRecord> records;
    records.reserve(times.size());
    for (double t : times) {
        const WignerField ft = propagate_closed(f0, params, t);
        const FieldMinEig m = field_min_eigenvalue(ft);
        records.push_back({t, m.value, m.p});
    }
    return records;
}

}  // namespace cqsim
