#include "cqsim/unravel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iostream>
#include <limits>
#include <thread>

#include "cqsim/errors.hpp"
#include "cqsim/rng.hpp"
#include "cqsim/validity.hpp"

namespace cqsim {

namespace {

double real_trace(const ComplexMat2& m) { return (m.m00 + m.m11).real(); }

StateSnapshot snapshot_of(const ComplexMat2& rho, double p) {
    StateSnapshot s;
    s.p = p;
    s.r00 = rho.m00.real();
    s.r11 = rho.m11.real();
    s.re01 = 0.5 * (rho.m01.real() + rho.m10.real());
    s.im01 = 0.5 * (rho.m01.imag() - rho.m10.imag());
    return s;
}

void require_backaction_defined(const ModelParams& params) {
    if (params.lambda != 0.0 && params.gamma_c <= 0.0) {
        throw PreconditionError(
            "unraveling requires gamma_c > 0 when lambda != 0: the qubit "
            "back-action coefficient lambda / sqrt(8 gamma_c) diverges");
    }
}

}  // namespace

TrajectoryState step_sde(const TrajectoryState& state, const ModelParams& params, double dt,
                         double dw, SdeScheme scheme, bool renormalize) {
    params.validate();
    if (dt < 0.0) throw ConfigError("step size must be >= 0");
    require_backaction_defined(params);

    const double m =
        params.lambda == 0.0 ? 0.0 : -params.lambda / std::sqrt(8.0 * params.gamma_c);

    const ComplexMat2& a = params.coupling.matrix();
    const ComplexMat2& rho = state.rho;
    const double mean_a = expectation(a, rho) / real_trace(rho);

    ComplexMat2 drift = ComplexMat2::zero();
    if (params.lambda != 0.0 && params.q != 0.0) {
        const cplx unit(0.0, -params.lambda * params.q / params.hbar);
        drift += unit * commutator(a, rho);
    }
    if (params.gamma_q != 0.0) {
        drift -= params.gamma_q * commutator(a, commutator(a, rho));
    }

    // Conditioning map; dividing by the actual trace in mean_a makes the
    // increment traceless identically, not just in expectation.
    const ComplexMat2 noise =
        m == 0.0 ? ComplexMat2::zero()
                 : m * (anticommutator(a, rho) - (2.0 * mean_a) * rho);

    TrajectoryState next;
    next.t = state.t + dt;
    next.p = state.p - params.lambda * mean_a * dt + std::sqrt(2.0 * params.gamma_c) * dw;
    next.rho = rho + dt * drift + dw * noise;

    if (scheme == SdeScheme::milstein && m != 0.0) {
        // 0.5 (dW^2 - dt) S'(rho)[S(rho)] with S the conditioning map; its
        // derivative in direction X is m ({A, X} - 2 tr(A X) rho - 2 <A> X).
        const ComplexMat2 deriv =
            m * (anticommutator(a, noise) - (2.0 * expectation(a, noise)) * rho -
                 (2.0 * mean_a) * noise);
        next.rho += (0.5 * (dw * dw - dt)) * deriv;
    }

    if (renormalize) {
        next.rho = (1.0 / real_trace(next.rho)) * next.rho;
    }
    return next;
}

void EnsembleSpec::validate() const {
    if (!(sde.dt > 0.0)) throw ConfigError("dt must be > 0");
    if (t_final < 0.0) throw ConfigError("t_final must be >= 0");
    if (record_stride < 1) throw ConfigError("record_stride must be >= 1");
    if (n_traj < 1) throw ConfigError("n_traj must be >= 1");
    if (!(positivity_abort_threshold < 0.0)) {
        throw ConfigError("positivity_abort_threshold must be negative");
    }
}

int EnsembleResult::index_of_time(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

ComplexMat2 EnsembleResult::rho_at(int time_index, int traj) const {
    if (time_index < 0 || time_index >= static_cast<int>(snapshots.size()) || traj < 0 ||
        traj >= static_cast<int>(snapshots[time_index].size())) {
        throw InternalError("snapshot index out of range");
    }
    const StateSnapshot& s = snapshots[time_index][traj];
    return {cplx(s.r00, 0.0), cplx(s.re01, s.im01), cplx(s.re01, -s.im01), cplx(s.r11, 0.0)};
}

ComplexMat2 EnsembleResult::mean_state(int time_index) const {
    ComplexMat2 acc = ComplexMat2::zero();
    const int n = static_cast<int>(snapshots.at(time_index).size());
    for (int s = 0; s < n; ++s) acc += rho_at(time_index, s);
    return (1.0 / n) * acc;
}

MeanWithError EnsembleResult::coupling_expectation_stats(int time_index) const {
    const ComplexMat2& a = params.coupling.matrix();
    const int n = static_cast<int>(snapshots.at(time_index).size());
    std::vector<double> e(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        const ComplexMat2 rho = rho_at(time_index, s);
        e[s] = expectation(a, rho) / real_trace(rho);
    }
    MeanWithError out;
    for (double v : e) out.mean += v;
    out.mean /= n;
    if (n >= 2) {
        double ss = 0.0;
        for (double v : e) ss += (v - out.mean) * (v - out.mean);
        out.std_error = std::sqrt(ss / (n - 1) / n);
    }
    return out;
}

EnsembleResult run_ensemble(const EnsembleSpec& spec, const InitialCondition& init,
                            const ModelParams& params, int n_threads) {
    spec.validate();
    params.validate();
    init.validate();
    if (n_threads < 0) throw ConfigError("n_threads must be >= 0");
    require_backaction_defined(params);

    const TradeoffCheck tradeoff = check_tradeoff(params);
    if (!tradeoff.satisfied) {
        if (!spec.allow_tradeoff_violation) {
            throw PreconditionError(
                "trade-off margin gamma_c * gamma_q - lambda^2/16 = " +
                format_double(tradeoff.margin) +
                " is negative, so individual trajectories leave the density class; "
                "set allow_tradeoff_violation to run anyway");
        }
        std::cerr << "warning: running below the trade-off line (margin "
                  << format_double(tradeoff.margin) << "); positivity aborts are expected\n";
    }

    const double dt = spec.sde.dt;
    const long long n_steps = std::llround(spec.t_final / dt);
    if (std::abs(n_steps * dt - spec.t_final) > 1e-9 * std::max(1.0, std::abs(spec.t_final))) {
        throw ConfigError("t_final must be an integer multiple of dt");
    }

    std::vector<long long> record_steps;
    for (long long k = 0; k <= n_steps; k += spec.record_stride) record_steps.push_back(k);
    if (record_steps.back() != n_steps) record_steps.push_back(n_steps);

    EnsembleResult result;
    result.spec = spec;
    result.params = params;
    result.init = init;
    result.times.reserve(record_steps.size());
    for (long long k : record_steps) result.times.push_back(static_cast<double>(k) * dt);
    result.snapshots.assign(record_steps.size(),
                            std::vector<StateSnapshot>(static_cast<std::size_t>(spec.n_traj)));
    result.aborted.assign(static_cast<std::size_t>(spec.n_traj), 0);

    int workers = n_threads;
    if (workers == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
    }
    workers = std::max(1, std::min(workers, spec.n_traj));

    std::vector<double> worker_min(static_cast<std::size_t>(workers),
                                   std::numeric_limits<double>::infinity());
    std::vector<std::exception_ptr> worker_error(static_cast<std::size_t>(workers));

    // Trajectory s draws exclusively from stream s, so the partition into
    // blocks has no effect on any number drawn; threads only ever write to
    // their own trajectory columns.
    auto run_block = [&](int w, int begin, int end) {
        try {
            double local_min = std::numeric_limits<double>::infinity();
            for (int s = begin; s < end; ++s) {
                const CounterRng rng(spec.seed, static_cast<std::uint64_t>(s));
                TrajectoryState st;
                st.t = 0.0;
                st.p = init.p0;
                if (init.p_dist == MomentumDist::gaussian) {
                    st.p += init.sigma_p * rng.normal(0);  // counter 0: initial draw
                }
                st.rho = init.rho0.matrix();
                local_min = std::min(local_min, min_eigenvalue(st.rho.hermitian_part()));
                bool frozen = false;
                std::size_t ri = 0;
                for (long long k = 0; k <= n_steps; ++k) {
                    if (ri < record_steps.size() && record_steps[ri] == k) {
                        result.snapshots[ri][static_cast<std::size_t>(s)] =
                            snapshot_of(st.rho, st.p);
                        ++ri;
                    }
                    if (k == n_steps || frozen) continue;
                    const double dw =
                        std::sqrt(dt) * rng.normal(static_cast<std::uint64_t>(k) + 1);
                    st = step_sde(st, params, dt, dw, spec.sde.scheme, spec.sde.renormalize);
                    st.t = static_cast<double>(k + 1) * dt;
                    const double me = min_eigenvalue(st.rho.hermitian_part());
                    local_min = std::min(local_min, me);
                    if (me < spec.positivity_abort_threshold) {
                        // Freeze, don't repair: the remaining record slots
                        // repeat this state and the flag reports the event.
                        frozen = true;
                        result.aborted[static_cast<std::size_t>(s)] = 1;
                    }
                }
            }
            worker_min[static_cast<std::size_t>(w)] = local_min;
        } catch (...) {
            worker_error[static_cast<std::size_t>(w)] = std::current_exception();
        }
    };

    if (workers == 1) {
        run_block(0, 0, spec.n_traj);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            const int begin = static_cast<int>(static_cast<long long>(spec.n_traj) * w / workers);
            const int end =
                static_cast<int>(static_cast<long long>(spec.n_traj) * (w + 1) / workers);
            pool.emplace_back(run_block, w, begin, end);
        }
        for (std::thread& th : pool) th.join();
    }
    for (const std::exception_ptr& err : worker_error) {
        if (err) std::rethrow_exception(err);
    }

    result.min_eig_seen = *std::min_element(worker_min.begin(), worker_min.end());
    for (std::uint8_t f : result.aborted) result.abort_count += f != 0;
    return result;
}

WignerField reconstruct_field(const EnsembleResult& result, const MomentumGrid& grid,
                              double at) {
    const int ti = result.index_of_time(at);
    if (ti < 0) {
        throw ConfigError("time " + format_double(at) + " is not among the recorded times");
    }
    WignerField f = WignerField::zero(grid, result.params.q);
    const std::vector<StateSnapshot>& row = result.snapshots[static_cast<std::size_t>(ti)];
    for (std::size_t s = 0; s < row.size(); ++s) {
        const int j = grid.bin_index(row[s].p);
        if (j < 0) continue;  // off-grid momentum: dropped, visible in the normalization
        f.values[static_cast<std::size_t>(j)] += result.rho_at(ti, static_cast<int>(s));
    }
    const double scale = 1.0 / (static_cast<double>(result.spec.n_traj) * grid.dp());
    for (ComplexMat2& v : f.values) v = scale * v;
    return f;
}

BornStats born_statistics(const EnsembleResult& result, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ConfigError("born threshold must be strictly between 0 and 1");
    }
    BornStats out;
    out.threshold = threshold;
    const int ti = static_cast<int>(result.times.size()) - 1;
    const Observable& a = result.params.coupling;
    const double edge_sum = a.eig_max() + a.eig_min();
    const double gap = a.gap();
    const int n = static_cast<int>(result.snapshots.at(static_cast<std::size_t>(ti)).size());

    double sum_p_up = 0.0;
    double sum_p_down = 0.0;
    for (int s = 0; s < n; ++s) {
        const StateSnapshot& sn = result.snapshots[static_cast<std::size_t>(ti)][static_cast<std::size_t>(s)];
        if (gap == 0.0) {
            ++out.n_unresolved;  // a multiple of the identity resolves nothing
            continue;
        }
        const ComplexMat2 rho = result.rho_at(ti, s);
        const double e = expectation(a.matrix(), rho) / real_trace(rho);
        const double coord = (2.0 * e - edge_sum) / gap;
        if (coord > threshold) {
            ++out.n_up;
            sum_p_up += sn.p;
        } else if (coord < -threshold) {
            ++out.n_down;
            sum_p_down += sn.p;
        } else {
            ++out.n_unresolved;
        }
    }
    out.frac_up = static_cast<double>(out.n_up) / n;
    out.frac_down = static_cast<double>(out.n_down) / n;
    out.frac_unresolved = static_cast<double>(out.n_unresolved) / n;
    if (out.n_up > 0) out.mean_final_p_up = sum_p_up / out.n_up;
    if (out.n_down > 0) out.mean_final_p_down = sum_p_down / out.n_down;
    return out;
}

}  // namespace cqsim
