// Command-line front end: runs the solvers described by an INI config (or a
// named preset) and writes deterministic artifacts into --out.  Every run
// writes config.txt, the canonical echo of the effective configuration;
// output bytes depend only on the configuration and seed, never on thread
// count, directory layout, or wall-clock time.
//
// Exit codes: 0 success, 2 bad usage or bad config, 3 violated precondition
// (guards), 4 internal invariant failure.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqsim/closed.hpp"
#include "cqsim/config.hpp"
#include "cqsim/errors.hpp"
#include "cqsim/master.hpp"
#include "cqsim/meanfield.hpp"
#include "cqsim/unravel.hpp"
#include "cqsim/validity.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using namespace cqsim;

namespace {

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path.string());
    f << content;
    f.flush();
    if (!f) throw ConfigError("write failed: " + path.string());
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ojson json_or_null(const std::optional<double>& v) {
    return v ? ojson(*v) : ojson(nullptr);
}

ojson model_json(const RunConfig& cfg) {
    ojson j;
    j["lambda"] = cfg.model.lambda;
    j["hbar"] = cfg.model.hbar;
    j["gamma_c"] = cfg.model.gamma_c;
    j["gamma_q"] = cfg.model.gamma_q;
    j["q"] = cfg.model.q;
    j["coupling"] = {{"a00", cfg.coupling_matrix.a00},
                     {"a11", cfg.coupling_matrix.a11},
                     {"a01_re", cfg.coupling_matrix.a01_re},
                     {"a01_im", cfg.coupling_matrix.a01_im}};
    return j;
}

ojson grid_json(const RunConfig& cfg) {
    return {{"p_min", cfg.p_min}, {"p_max", cfg.p_max}, {"n", cfg.n_points}};
}

ojson initial_json(const RunConfig& cfg) {
    ojson j;
    j["bloch_x"] = cfg.bloch.bx;
    j["bloch_y"] = cfg.bloch.by;
    j["bloch_z"] = cfg.bloch.bz;
    j["p_dist"] = cfg.init.p_dist == MomentumDist::gaussian ? "gaussian" : "delta";
    j["p0"] = cfg.init.p0;
    j["sigma_p"] = cfg.init.sigma_p;
    return j;
}

ojson sde_json(const RunConfig& cfg) {
    ojson j;
    j["dt"] = cfg.ensemble.sde.dt;
    j["t_final"] = cfg.ensemble.t_final;
    j["record_stride"] = cfg.ensemble.record_stride;
    j["n_traj"] = cfg.ensemble.n_traj;
    j["seed"] = cfg.ensemble.seed;
    j["renormalize"] = cfg.ensemble.sde.renormalize;
    j["scheme"] = cfg.ensemble.sde.scheme == SdeScheme::euler ? "euler" : "milstein";
    j["positivity_abort_threshold"] = cfg.ensemble.positivity_abort_threshold;
    j["allow_tradeoff_violation"] = cfg.ensemble.allow_tradeoff_violation;
    return j;
}

ojson tradeoff_json(const TradeoffCheck& t) {
    ojson j;
    j["margin"] = t.margin;
    j["satisfied"] = t.satisfied;
    j["saturated"] = t.saturated;
    j["residual_dephasing"] = json_or_null(t.residual_dephasing);
    return j;
}

ojson preset_json(const RunConfig& cfg) {
    return cfg.preset.empty() ? ojson(nullptr) : ojson(cfg.preset);
}

ojson window_json(const ValidityReport& r) {
    ojson j;
    j["chi"] = r.chi;
    j["mean_coupling"] = r.mean_a;
    j["var_coupling"] = r.var_a;
    j["lambda_zero"] = r.lambda_zero;
    j["tau_lower"] = json_or_null(r.tau_lower);
    const bool unbounded = std::isinf(r.tau_upper);
    j["tau_upper"] = unbounded ? ojson(nullptr) : ojson(r.tau_upper);
    j["tau_upper_unbounded"] = unbounded;
    j["nonempty"] = r.nonempty;
    j["tau_mid"] = json_or_null(r.tau_mid);
    j["drift_resolution_ratio"] = json_or_null(r.drift_resolution_ratio);
    j["dephasing_ratio"] = json_or_null(r.dephasing_ratio);
    return j;
}

std::string json_text(const ojson& j) { return j.dump(2) + "\n"; }

// Shared by the two field solvers: propagate to each listed time, record
// the pointwise-minimum eigenvalue, optionally dump the field.
void run_field_command(const RunConfig& cfg, const fs::path& out, bool open_system) {
    const WignerField f0 = pde_initial_field(cfg.init, cfg.grid, cfg.model.q);
    std::ostringstream csv;
    csv << "t,min_eigenvalue,p_at\n";
    for (std::size_t i = 0; i < cfg.times.list.size(); ++i) {
        const double t = cfg.times.list[i];
        const WignerField ft = open_system ? propagate_open(f0, cfg.model, t)
                                           : propagate_closed(f0, cfg.model, t);
        const FieldMinEig m = field_min_eigenvalue(ft);
        csv << format_double(t) << "," << format_double(m.value) << "," << format_double(m.p)
            << "\n";
        if (cfg.write_fields) {
            write_field_csv(ft, cfg.model, t,
                            (out / ("field_" + std::to_string(i) + ".csv")).string());
        }
    }
    write_text(out / (open_system ? "positivity.csv" : "negativity.csv"), csv.str());
}

void cmd_closed(const RunConfig& cfg, const fs::path& out) {
    run_field_command(cfg, out, false);
}

void cmd_master(const RunConfig& cfg, const fs::path& out) {
    run_field_command(cfg, out, true);
}

void cmd_meanfield(const RunConfig& cfg, const fs::path& out) {
    const std::vector<TrajectoryState> path =
        run_meanfield(cfg.init, cfg.model, cfg.times.t_final, cfg.times.dt);
    std::ostringstream csv;
    csv << "t,p,re00,re01,im01,re11,purity\n";
    const std::size_t stride = static_cast<std::size_t>(cfg.times.record_stride);
    for (std::size_t k = 0;;) {  // every stride-th step plus the final one
        const TrajectoryState& s = path[k];
        csv << format_double(s.t) << "," << format_double(s.p) << ","
            << format_double(s.rho.m00.real()) << "," << format_double(s.rho.m01.real()) << ","
            << format_double(s.rho.m01.imag()) << "," << format_double(s.rho.m11.real()) << ","
            << format_double(purity(s.rho)) << "\n";
        if (k == path.size() - 1) break;
        k = std::min(k + stride, path.size() - 1);
    }
    write_text(out / "meanfield.csv", csv.str());
}

void cmd_ensemble(const RunConfig& cfg, const fs::path& out, int threads) {
    const EnsembleResult result = run_ensemble(cfg.ensemble, cfg.init, cfg.model, threads);

    ojson j;
    j["command"] = "ensemble";
    j["preset"] = preset_json(cfg);
    j["model"] = model_json(cfg);
    j["grid"] = grid_json(cfg);
    j["initial"] = initial_json(cfg);
    j["sde"] = sde_json(cfg);
    j["tradeoff"] = tradeoff_json(check_tradeoff(cfg.model));
    j["diagnostics"] = {{"abort_count", result.abort_count},
                        {"min_eigenvalue_seen", result.min_eig_seen}};

    const BornStats born = born_statistics(result, cfg.born_threshold);
    ojson bj;
    bj["threshold"] = born.threshold;
    bj["n_up"] = born.n_up;
    bj["n_down"] = born.n_down;
    bj["n_unresolved"] = born.n_unresolved;
    bj["frac_up"] = born.frac_up;
    bj["frac_down"] = born.frac_down;
    bj["frac_unresolved"] = born.frac_unresolved;
    bj["mean_final_p_up"] = json_or_null(born.mean_final_p_up);
    bj["mean_final_p_down"] = json_or_null(born.mean_final_p_down);
    j["born"] = bj;

    const MeanWithError first = result.coupling_expectation_stats(0);
    const MeanWithError last =
        result.coupling_expectation_stats(static_cast<int>(result.times.size()) - 1);
    j["martingale"] = {{"initial", first.mean},
                       {"final", last.mean},
                       {"std_error_final", last.std_error}};

    ojson moments = ojson::array();
    for (std::size_t ti = 0; ti < result.times.size(); ++ti) {
        const std::vector<StateSnapshot>& row = result.snapshots[ti];
        double mean_p = 0.0;
        for (const StateSnapshot& s : row) mean_p += s.p;
        mean_p /= static_cast<double>(row.size());
        double var_p = 0.0;
        for (const StateSnapshot& s : row) var_p += (s.p - mean_p) * (s.p - mean_p);
        if (row.size() > 1) var_p /= static_cast<double>(row.size() - 1);
        const int t_index = static_cast<int>(ti);
        ojson mj;
        mj["t"] = result.times[ti];
        mj["mean_p"] = mean_p;
        mj["var_p"] = var_p;
        mj["mean_coupling"] = result.coupling_expectation_stats(t_index).mean;
        mj["purity_of_mean_state"] = purity(result.mean_state(t_index));
        moments.push_back(mj);
    }
    j["moments"] = moments;
    write_text(out / "summary.json", json_text(j));

    const int n_dump = std::min(cfg.write_trajectories, cfg.ensemble.n_traj);
    for (int k = 0; k < n_dump; ++k) {
        std::ostringstream csv;
        csv << "t,p,bloch_x,bloch_y,bloch_z,purity,min_eig\n";
        for (std::size_t ti = 0; ti < result.times.size(); ++ti) {
            const StateSnapshot& s = result.snapshots[ti][static_cast<std::size_t>(k)];
            const ComplexMat2 rho = result.rho_at(static_cast<int>(ti), k);
            csv << format_double(result.times[ti]) << "," << format_double(s.p) << ","
                << format_double(2.0 * s.re01) << "," << format_double(-2.0 * s.im01) << ","
                << format_double(s.r00 - s.r11) << "," << format_double(purity(rho)) << ","
                << format_double(min_eigenvalue(rho)) << "\n";
        }
        write_text(out / ("trajectory_" + std::to_string(k) + ".csv"), csv.str());
    }
}

void cmd_validity(const RunConfig& cfg, const fs::path& out) {
    const ValidityReport report = timescale_window(cfg.model, cfg.init.rho0, cfg.chi);

    ojson j;
    j["command"] = "validity";
    j["preset"] = preset_json(cfg);
    j["model"] = model_json(cfg);
    j["state"] = {{"bloch_x", cfg.bloch.bx}, {"bloch_y", cfg.bloch.by}, {"bloch_z", cfg.bloch.bz}};
    j["tradeoff"] = tradeoff_json(check_tradeoff(cfg.model));
    j["window"] = window_json(report);
    write_text(out / "validity.json", json_text(j));

    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(cfg.sweep_points));
    constexpr double kPi = 3.14159265358979323846;
    for (int i = 0; i < cfg.sweep_points; ++i) {
        angles.push_back(kPi * i / (cfg.sweep_points - 1));
    }
    const std::vector<WindowSweepRow> rows = window_sweep(cfg.model, angles, cfg.chi);
    std::ostringstream csv;
    csv << "theta,mean_coupling,var_coupling,tau_lower,tau_upper,nonempty\n";
    for (const WindowSweepRow& row : rows) {
        csv << format_double(row.theta) << "," << format_double(row.report.mean_a) << ","
            << format_double(row.report.var_a) << ",";
        if (row.report.tau_lower) csv << format_double(*row.report.tau_lower);
        csv << ",";
        if (std::isfinite(row.report.tau_upper)) csv << format_double(row.report.tau_upper);
        csv << "," << (row.report.nonempty ? 1 : 0) << "\n";
    }
    write_text(out / "window_sweep.csv", csv.str());
}

void cmd_compare(const RunConfig& cfg, const fs::path& out, int threads) {
    if (cfg.grid.n % cfg.compare_bins != 0) {
        throw ConfigError("[compare] bins must divide the grid size");
    }
    const MomentumGrid coarse = MomentumGrid::make(cfg.p_min, cfg.p_max, cfg.compare_bins);
    const int factor = cfg.grid.n / cfg.compare_bins;

    const EnsembleResult result = run_ensemble(cfg.ensemble, cfg.init, cfg.model, threads);

    double horizon = 0.0;
    for (double t : cfg.times.list) horizon = std::max(horizon, t);
    const std::vector<TrajectoryState> mf =
        run_meanfield(cfg.init, cfg.model, horizon, cfg.times.dt);

    const WignerField f0 = pde_initial_field(cfg.init, cfg.grid, cfg.model.q);
    std::ostringstream csv;
    csv << "t,l1_field,td_meanfield,td_ensemble\n";
    ojson rows = ojson::array();
    for (double t : cfg.times.list) {
        const int ti = result.index_of_time(t);
        if (ti < 0) {
            throw ConfigError("compare time " + format_double(t) +
                              " is not on the ensemble recording grid");
        }
        const long long mk = std::llround(t / cfg.times.dt);
        if (std::abs(static_cast<double>(mk) * cfg.times.dt - t) >
            1e-9 * std::max(1.0, std::abs(t))) {
            throw ConfigError("compare time " + format_double(t) +
                              " is not on the mean-field time grid");
        }

        const WignerField exact = propagate_open(f0, cfg.model, t);
        const WignerField exact_coarse = coarse_grain(exact, factor);
        const WignerField sampled = reconstruct_field(result, coarse, t);
        const double l1 = field_l1_distance(sampled, exact_coarse);

        const ComplexMat2 exact_qubit = qubit_marginal_raw(exact);
        const double td_mf =
            trace_distance(mf[static_cast<std::size_t>(mk)].rho, exact_qubit);
        const double td_ens = trace_distance(result.mean_state(ti), exact_qubit);

        csv << format_double(t) << "," << format_double(l1) << "," << format_double(td_mf)
            << "," << format_double(td_ens) << "\n";
        rows.push_back(
            {{"t", t}, {"l1_field", l1}, {"td_meanfield", td_mf}, {"td_ensemble", td_ens}});
    }
    write_text(out / "compare.csv", csv.str());

    ojson j;
    j["command"] = "compare";
    j["preset"] = preset_json(cfg);
    j["model"] = model_json(cfg);
    j["grid"] = grid_json(cfg);
    j["initial"] = initial_json(cfg);
    j["sde"] = sde_json(cfg);
    j["bins"] = cfg.compare_bins;
    j["tradeoff"] = tradeoff_json(check_tradeoff(cfg.model));
    j["window"] = window_json(timescale_window(cfg.model, cfg.init.rho0, cfg.chi));
    j["rows"] = rows;
    write_text(out / "compare.json", json_text(j));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qubit + heavy-particle hybrid dynamics toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int threads = 0;
    app.add_option("--config", config_path, "INI config file overlaying the defaults/preset");
    app.add_option("--preset", preset, "built-in scenario: fig1, negativity-demo, page-geilker");
    auto* seed_opt = app.add_option("--seed", seed, "override the ensemble seed");
    app.add_option("--out", out_dir, "output directory (created if missing)");
    app.add_option("--threads", threads, "worker threads for ensembles (0 = automatic)");

    CLI::App* subs[6] = {
        app.add_subcommand("closed", "reversible field evolution; negativity records"),
        app.add_subcommand("master", "open-system field evolution; positivity records"),
        app.add_subcommand("meanfield", "semiclassical reduction along one trajectory"),
        app.add_subcommand("ensemble", "stochastic trajectory ensemble with statistics"),
        app.add_subcommand("validity", "trade-off check and mean-field validity window"),
        app.add_subcommand("compare", "ensemble and mean-field against the exact solution"),
    };
    for (CLI::App* s : subs) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg;
        if (!preset.empty()) cfg = preset_config(preset);
        if (!config_path.empty()) apply_config_text(cfg, read_file(config_path), config_path);
        if (seed_opt->count() > 0) cfg.ensemble.seed = seed;
        if (threads < 0) throw ConfigError("--threads must be >= 0");

        const fs::path out(out_dir);
        fs::create_directories(out);
        write_text(out / "config.txt", render_config(cfg));

        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "closed") cmd_closed(cfg, out);
        else if (cmd == "master") cmd_master(cfg, out);
        else if (cmd == "meanfield") cmd_meanfield(cfg, out);
        else if (cmd == "ensemble") cmd_ensemble(cfg, out, threads);
        else if (cmd == "validity") cmd_validity(cfg, out);
        else cmd_compare(cfg, out, threads);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 3;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
