#include "cqsim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "cqsim/errors.hpp"

namespace cqsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, const std::string& origin, int line) {
    if (v.empty()) fail(origin, line, "empty value");
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size()) fail(origin, line, "not a number: '" + v + "'");
    if (!std::isfinite(d)) fail(origin, line, "value must be finite: '" + v + "'");
    return d;
}

int parse_int(const std::string& v, const std::string& origin, int line) {
    if (v.empty()) fail(origin, line, "empty value");
    char* end = nullptr;
    const long long i = std::strtoll(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size()) fail(origin, line, "not an integer: '" + v + "'");
    if (i < -2147483648LL || i > 2147483647LL) fail(origin, line, "integer out of range: '" + v + "'");
    return static_cast<int>(i);
}

std::uint64_t parse_u64(const std::string& v, const std::string& origin, int line) {
    if (v.empty() || v[0] == '-') fail(origin, line, "not a non-negative integer: '" + v + "'");
    char* end = nullptr;
    const unsigned long long i = std::strtoull(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size()) fail(origin, line, "not an integer: '" + v + "'");
    return static_cast<std::uint64_t>(i);
}

bool parse_bool(const std::string& v, const std::string& origin, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(origin, line, "not a boolean (true/false/1/0): '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, const std::string& origin, int line) {
    // Split by hand: a trailing comma must surface as an empty item rather
    // than vanish the way istream getline drops it.
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = v.find(',', start);
        const std::string item =
            comma == std::string::npos ? v.substr(start) : v.substr(start, comma - start);
        out.push_back(parse_double(trim(item), origin, line));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void finalize(RunConfig& cfg) {
    const ComplexMat2 a{cfg.coupling_matrix.a00,
                        cplx(cfg.coupling_matrix.a01_re, cfg.coupling_matrix.a01_im),
                        cplx(cfg.coupling_matrix.a01_re, -cfg.coupling_matrix.a01_im),
                        cfg.coupling_matrix.a11};
    cfg.model.coupling = Observable::from_matrix(a);
    cfg.model.validate();
    cfg.grid = MomentumGrid::make(cfg.p_min, cfg.p_max, cfg.n_points);
    cfg.init.rho0 = QubitDensity::from_bloch(cfg.bloch.bx, cfg.bloch.by, cfg.bloch.bz);
    cfg.init.validate();
    cfg.ensemble.validate();
    if (!(cfg.times.dt > 0.0)) throw ConfigError("[times] dt must be > 0");
    if (cfg.times.t_final < 0.0) throw ConfigError("[times] t_final must be >= 0");
    if (cfg.times.record_stride < 1) throw ConfigError("[times] record_stride must be >= 1");
    if (cfg.times.list.empty()) throw ConfigError("[times] list must not be empty");
    for (double t : cfg.times.list) {
        if (t < 0.0) throw ConfigError("[times] list entries must be >= 0");
    }
    if (!(cfg.chi > 1.0)) throw ConfigError("[validity] chi must be > 1");
    if (cfg.sweep_points < 2) throw ConfigError("[validity] sweep_points must be >= 2");
    if (cfg.compare_bins < 2) throw ConfigError("[compare] bins must be >= 2");
    if (cfg.write_trajectories < 0) throw ConfigError("[output] write_trajectories must be >= 0");
    if (!(cfg.born_threshold > 0.0 && cfg.born_threshold < 1.0)) {
        throw ConfigError("[output] born_threshold must be in (0, 1)");
    }
}

}  // namespace

void apply_config_text(RunConfig& target, const std::string& text, const std::string& origin) {
    // Stage everything on a copy so a failed overlay leaves the caller's
    // config untouched.
    RunConfig cfg = target;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find_first_of("#;");
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "grid" && section != "initial" &&
                section != "sde" && section != "times" && section != "validity" &&
                section != "compare" && section != "output") {
                fail(origin, line_no, "unknown section [" + section + "]");
            }
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section.empty()) fail(origin, line_no, "key '" + key + "' outside any section");

        auto num = [&] { return parse_double(val, origin, line_no); };
        auto integer = [&] { return parse_int(val, origin, line_no); };
        auto boolean = [&] { return parse_bool(val, origin, line_no); };

        if (section == "model") {
            if (key == "lambda") cfg.model.lambda = num();
            else if (key == "hbar") cfg.model.hbar = num();
            else if (key == "gamma_c") cfg.model.gamma_c = num();
            else if (key == "gamma_q") cfg.model.gamma_q = num();
            else if (key == "q") cfg.model.q = num();
            else if (key == "a00") cfg.coupling_matrix.a00 = num();
            else if (key == "a11") cfg.coupling_matrix.a11 = num();
            else if (key == "a01_re") cfg.coupling_matrix.a01_re = num();
            else if (key == "a01_im") cfg.coupling_matrix.a01_im = num();
            else fail(origin, line_no, "unknown key '" + key + "' in [model]");
        } else if (section == "grid") {
            if (key == "p_min") cfg.p_min = num();
            else if (key == "p_max") cfg.p_max = num();
            else if (key == "n") cfg.n_points = integer();
            else fail(origin, line_no, "unknown key '" + key + "' in [grid]");
        } else if (section == "initial") {
            if (key == "bloch_x") cfg.bloch.bx = num();
            else if (key == "bloch_y") cfg.bloch.by = num();
            else if (key == "bloch_z") cfg.bloch.bz = num();
            else if (key == "p0") cfg.init.p0 = num();
            else if (key == "sigma_p") cfg.init.sigma_p = num();
            else if (key == "p_dist") {
                if (val == "gaussian") cfg.init.p_dist = MomentumDist::gaussian;
                else if (val == "delta") cfg.init.p_dist = MomentumDist::delta;
                else fail(origin, line_no, "p_dist must be 'gaussian' or 'delta'");
            } else fail(origin, line_no, "unknown key '" + key + "' in [initial]");
        } else if (section == "sde") {
            if (key == "dt") cfg.ensemble.sde.dt = num();
            else if (key == "t_final") cfg.ensemble.t_final = num();
            else if (key == "record_stride") cfg.ensemble.record_stride = integer();
            else if (key == "n_traj") cfg.ensemble.n_traj = integer();
            else if (key == "seed") cfg.ensemble.seed = parse_u64(val, origin, line_no);
            else if (key == "renormalize") cfg.ensemble.sde.renormalize = boolean();
            else if (key == "positivity_abort_threshold") cfg.ensemble.positivity_abort_threshold = num();
            else if (key == "allow_tradeoff_violation") cfg.ensemble.allow_tradeoff_violation = boolean();
            else if (key == "scheme") {
                if (val == "euler") cfg.ensemble.sde.scheme = SdeScheme::euler;
                else if (val == "milstein") cfg.ensemble.sde.scheme = SdeScheme::milstein;
                else fail(origin, line_no, "scheme must be 'euler' or 'milstein'");
            } else fail(origin, line_no, "unknown key '" + key + "' in [sde]");
        } else if (section == "times") {
            if (key == "list") cfg.times.list = parse_list(val, origin, line_no);
            else if (key == "dt") cfg.times.dt = num();
            else if (key == "t_final") cfg.times.t_final = num();
            else if (key == "record_stride") cfg.times.record_stride = integer();
            else fail(origin, line_no, "unknown key '" + key + "' in [times]");
        } else if (section == "validity") {
            if (key == "chi") cfg.chi = num();
            else if (key == "sweep_points") cfg.sweep_points = integer();
            else fail(origin, line_no, "unknown key '" + key + "' in [validity]");
        } else if (section == "compare") {
            if (key == "bins") cfg.compare_bins = integer();
            else fail(origin, line_no, "unknown key '" + key + "' in [compare]");
        } else {  // output
            if (key == "write_fields") cfg.write_fields = boolean();
            else if (key == "write_trajectories") cfg.write_trajectories = integer();
            else if (key == "born_threshold") cfg.born_threshold = num();
            else fail(origin, line_no, "unknown key '" + key + "' in [output]");
        }
    }
    finalize(cfg);
    target = std::move(cfg);
}

namespace {

// Collapse onto definite coupling eigenvalues at the trade-off saturation
// point, starting from an even superposition and a momentum delta.
constexpr const char* kPresetFig1 = R"(
[model]
lambda = -1
gamma_c = 0.25
gamma_q = 0.25

[initial]
bloch_x = 1
bloch_y = 0
bloch_z = 0
p_dist = delta
p0 = 0

[sde]
dt = 0.001
t_final = 10
record_stride = 100
n_traj = 4000
seed = 1
positivity_abort_threshold = -0.01
)";

// Reversible dynamics pulling a superposition's momentum packets apart:
// the stranded coherence drives the field negative.
constexpr const char* kPresetNegativity = R"(
[model]
lambda = 1
gamma_c = 0
gamma_q = 0

[initial]
bloch_x = 1
bloch_y = 0
bloch_z = 0
p_dist = gaussian
p0 = 0
sigma_p = 1

[times]
list = 0,0.05,0.1,0.2,0.5,1,1.5,2
)";

// Strong-dephasing regime: a maximally mixed qubit and a narrow momentum
// distribution, resolved on a fine grid over a short horizon.
constexpr const char* kPresetPageGeilker = R"(
[model]
lambda = 1
gamma_c = 0.000625
gamma_q = 100

[grid]
p_min = -2
p_max = 2
n = 1024

[initial]
bloch_x = 0
bloch_y = 0
bloch_z = 0
p_dist = gaussian
p0 = 0
sigma_p = 0.05

[sde]
dt = 2e-5
t_final = 0.2
record_stride = 500
n_traj = 1000
seed = 1
positivity_abort_threshold = -0.05

[times]
list = 0,0.05,0.1,0.2
dt = 2e-5
t_final = 0.2
record_stride = 500
)";

}  // namespace

RunConfig preset_config(const std::string& name) {
    RunConfig cfg;
    if (name == "fig1") {
        apply_config_text(cfg, kPresetFig1, "preset fig1");
    } else if (name == "negativity-demo") {
        apply_config_text(cfg, kPresetNegativity, "preset negativity-demo");
    } else if (name == "page-geilker") {
        apply_config_text(cfg, kPresetPageGeilker, "preset page-geilker");
    } else {
        throw ConfigError("unknown preset '" + name +
                          "' (available: fig1, negativity-demo, page-geilker)");
    }
    cfg.preset = name;
    return cfg;
}

std::vector<std::string> preset_names() { return {"fig1", "negativity-demo", "page-geilker"}; }

std::string render_config(const RunConfig& cfg) {
    std::ostringstream out;
    if (!cfg.preset.empty()) out << "# preset: " << cfg.preset << "\n";
    out << "[model]\n";
    out << "lambda = " << format_double(cfg.model.lambda) << "\n";
    out << "hbar = " << format_double(cfg.model.hbar) << "\n";
    out << "gamma_c = " << format_double(cfg.model.gamma_c) << "\n";
    out << "gamma_q = " << format_double(cfg.model.gamma_q) << "\n";
    out << "q = " << format_double(cfg.model.q) << "\n";
    out << "a00 = " << format_double(cfg.coupling_matrix.a00) << "\n";
    out << "a11 = " << format_double(cfg.coupling_matrix.a11) << "\n";
    out << "a01_re = " << format_double(cfg.coupling_matrix.a01_re) << "\n";
    out << "a01_im = " << format_double(cfg.coupling_matrix.a01_im) << "\n";
    out << "\n[grid]\n";
    out << "p_min = " << format_double(cfg.p_min) << "\n";
    out << "p_max = " << format_double(cfg.p_max) << "\n";
    out << "n = " << cfg.n_points << "\n";
    out << "\n[initial]\n";
    out << "bloch_x = " << format_double(cfg.bloch.bx) << "\n";
    out << "bloch_y = " << format_double(cfg.bloch.by) << "\n";
    out << "bloch_z = " << format_double(cfg.bloch.bz) << "\n";
    out << "p_dist = " << (cfg.init.p_dist == MomentumDist::gaussian ? "gaussian" : "delta")
        << "\n";
    out << "p0 = " << format_double(cfg.init.p0) << "\n";
    out << "sigma_p = " << format_double(cfg.init.sigma_p) << "\n";
    out << "\n[sde]\n";
    out << "dt = " << format_double(cfg.ensemble.sde.dt) << "\n";
    out << "t_final = " << format_double(cfg.ensemble.t_final) << "\n";
    out << "record_stride = " << cfg.ensemble.record_stride << "\n";
    out << "n_traj = " << cfg.ensemble.n_traj << "\n";
    out << "seed = " << cfg.ensemble.seed << "\n";
    out << "renormalize = " << (cfg.ensemble.sde.renormalize ? "true" : "false") << "\n";
    out << "scheme = " << (cfg.ensemble.sde.scheme == SdeScheme::euler ? "euler" : "milstein")
        << "\n";
    out << "positivity_abort_threshold = "
        << format_double(cfg.ensemble.positivity_abort_threshold) << "\n";
    out << "allow_tradeoff_violation = "
        << (cfg.ensemble.allow_tradeoff_violation ? "true" : "false") << "\n";
    out << "\n[times]\n";
    out << "list = ";
    for (std::size_t i = 0; i < cfg.times.list.size(); ++i) {
        if (i > 0) out << ",";
        out << format_double(cfg.times.list[i]);
    }
    out << "\n";
    out << "dt = " << format_double(cfg.times.dt) << "\n";
    out << "t_final = " << format_double(cfg.times.t_final) << "\n";
    out << "record_stride = " << cfg.times.record_stride << "\n";
    out << "\n[validity]\n";
    out << "chi = " << format_double(cfg.chi) << "\n";
    out << "sweep_points = " << cfg.sweep_points << "\n";
    out << "\n[compare]\n";
    out << "bins = " << cfg.compare_bins << "\n";
    out << "\n[output]\n";
    out << "write_fields = " << (cfg.write_fields ? "true" : "false") << "\n";
    out << "write_trajectories = " << cfg.write_trajectories << "\n";
    out << "born_threshold = " << format_double(cfg.born_threshold) << "\n";
    return out.str();
}

}  // namespace cqsim
