#include "cli.hpp"

#include "qrabi/analytic.hpp"
#include "qrabi/error.hpp"
#include "qrabi/io.hpp"
#include "qrabi/scan.hpp"
#include "qrabi/spectra.hpp"
#include "qrabi/symmetry.hpp"
#include "qrabi/validation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

namespace qrabi::cli {

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

int exit_code_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidParam:
    case ErrorCode::UnknownLabel:
    case ErrorCode::SymmetryBroken:
    case ErrorCode::ConfigError:
    case ErrorCode::PhaseMismatch:
    case ErrorCode::ConditionsViolated:
    case ErrorCode::DimMismatch:
    case ErrorCode::IoError: return kConfigError;
    default: return kNumericalError;
    }
}

Axis parse_axis(const std::string& text, const std::string& expected_name) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    const bool named = parts.size() == 4;
    if (!named && parts.size() != 3) raise(ErrorCode::ConfigError, "axis '" + text + "' must be [name:]min:max:count");
    if (named && parts[0] != expected_name) {
        raise(ErrorCode::ConfigError, "axis '" + text + "' should be named '" + expected_name + "'");
    }
    const std::size_t o = named ? 1 : 0;
    Axis a;
    a.name = expected_name;
    try {
        std::size_t used = 0;
        a.min = std::stod(parts[o], &used);
        if (used != parts[o].size()) throw std::invalid_argument("min");
        a.max = std::stod(parts[o + 1], &used);
        if (used != parts[o + 1].size()) throw std::invalid_argument("max");
        a.count = std::stoi(parts[o + 2], &used);
        if (used != parts[o + 2].size()) throw std::invalid_argument("count");
    } catch (const std::exception&) {
        raise(ErrorCode::ConfigError, "cannot parse axis '" + text + "'");
    }
    if (a.count < 2 || !(a.min < a.max)) raise(ErrorCode::ConfigError, "axis '" + text + "' needs min < max and count >= 2");
    return a;
}

std::pair<Axis, Axis> parse_grid(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) raise(ErrorCode::ConfigError, "--grid needs two comma-separated axes");
    return {parse_axis(text.substr(0, comma), "omega"), parse_axis(text.substr(comma + 1), "x")};
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    std::filesystem::path p = csv;
    p.replace_extension(".json");
    if (p == csv) p += ".json";
    return p;
}

bool to_stdout(const std::string& path) { return path.empty() || path == "-"; }

void emit(const std::string& path, const std::string& csv, std::ostream& out) {
    if (to_stdout(path)) {
        out << csv;
    } else {
        write_file_atomic(path, csv);
    }
}

void check_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) raise(ErrorCode::ConfigError, std::string(what) + " must be positive");
}

void check_workers(int w) {
    if (w < 1) raise(ErrorCode::ConfigError, "--workers must be >= 1");
}

GConvention parse_convention(const std::string& s) {
    if (s == "reconciled") return GConvention::Reconciled;
    if (s == "printed") return GConvention::Printed;
    raise(ErrorCode::ConfigError, "unknown g convention '" + s + "'");
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
    std::string params;
    std::string preset;
    double omega = NAN;
    double gamma = NAN;
    double lambda = NAN;
    double omega_mode = 1.0;
    int n_max = 0;
    std::string sector = "full";
    int levels = 10;
    double bias = 0.0;
    double residual_tol = 1e-8;
    std::string output;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out, std::ostream& err) {
    ModelParams p;
    int n_max = 40;
    if (!a.params.empty()) {
        const ParamFile f = load_params_json(a.params);
        p = f.params;
        n_max = f.n_max;
    } else {
        if (std::isnan(a.omega) || std::isnan(a.gamma) || std::isnan(a.lambda)) {
            raise(ErrorCode::ConfigError, "--preset needs --omega, --gamma and --lambda");
        }
        check_positive(a.omega_mode, "--omega-mode");
        if (a.preset == "level-crossing") {
            p = preset_level_crossing(a.omega, a.gamma, a.lambda, a.omega_mode);
        } else if (a.preset == "qpt") {
            check_positive(a.gamma, "--gamma");
            p = preset_qpt(a.omega, a.gamma, a.lambda, a.omega_mode);
        } else {
            raise(ErrorCode::ConfigError, "unknown preset '" + a.preset + "'");
        }
    }
    if (a.n_max > 0) n_max = a.n_max;
    if (a.levels < 1) raise(ErrorCode::ConfigError, "--levels must be >= 1");
    check_positive(a.residual_tol, "--residual-tol");

    const Truncation t(n_max, a.residual_tol);
    const SectorLabel label = SectorLabel::parse(a.sector);
    EigenSet es;
    if (label.kind == SectorLabel::Kind::Full) {
        if (a.bias != 0.0) raise(ErrorCode::ConfigError, "--bias applies to sector solves only");
        es = eigh(build_full(p, t));
    } else {
        es = sector_lowest(p, t, sector_basis(label, t, p), a.levels, a.bias);
    }

    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(a.levels), es.values.size());
    std::string csv = "index,energy,residual\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        csv += std::to_string(i) + "," + format_double(es.values[i]) + "," + format_double(es.residuals[i]) + "\n";
        worst = std::max(worst, es.residuals[i]);
    }
    if (worst > t.residual_tol * std::max(1.0, es.norm)) {
        err << "error: eigen-residual " << worst << " exceeds " << t.residual_tol << " ||H||\n";
        return kNumericalError;
    }
    emit(a.output, csv, out);
    err << "spectrum: " << k << " levels of " << label.to_string() << " at n_max " << n_max << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------

struct PhaseArgs {
    std::string grid = "omega:-1.2:1.2:61,x:0.001:0.5:61";
    double omega_over_gamma = 1.0;
    int n_max = 48;
    std::string output;
    std::string unit = "gamma";
    int workers = 0;
};

int cmd_phase_diagram(const PhaseArgs& a, std::ostream& out, std::ostream& err) {
    auto [wa, xa] = parse_grid(a.grid);
    check_positive(a.omega_over_gamma, "--omega-over-gamma");
    if (a.n_max < 1) raise(ErrorCode::ConfigError, "--n-max must be >= 1");
    check_workers(a.workers);
    if (xa.min < 0.0) raise(ErrorCode::ConfigError, "x must be non-negative");

    const ScanResult r = scan_phase_diagram(phase_diagram_grid(wa, xa, a.omega_over_gamma, a.n_max), a.workers);
    std::map<int, int> counts;
    for (const ScanPoint& p : r.points)
        if (p.ok()) ++counts[p.label];
    err << "phase-diagram: " << r.points.size() << " points, " << r.failed() << " failed, "
        << format_double(r.provenance.wall_seconds) << " s\n";
    for (const auto& [label, n] : counts) err << "  m=" << label << ": " << n << "\n";

    emit(a.output, phase_diagram_csv(r), out);
    if (!to_stdout(a.output)) {
        write_file_atomic(sidecar_path(a.output), sidecar_json(r, {{"command", "phase-diagram"}, {"unit", a.unit}}));
    }
    return r.failed_fraction() > 0.05 ? kNumericalError : kOk;
}

// ---------------------------------------------------------------------------

struct QptArgs {
    std::string g = "0.5:1.5:51";
    double omega_over_gamma = 1e-2;
    double qutrit_ratio = 1.0;
    double bias = 1e-8;
    int n_max = 0;
    int n_floor = 64;
    int n_cap = 16384;
    std::string convention = "reconciled";
    std::string output;
    std::string unit = "gamma";
    int workers = 0;
};

int cmd_qpt_scan(const QptArgs& a, std::ostream& out, std::ostream& err) {
    const Axis ga = parse_axis(a.g, "g");
    if (ga.min < 0.0) raise(ErrorCode::ConfigError, "g must be non-negative");
    check_positive(a.omega_over_gamma, "--omega-over-gamma");
    check_workers(a.workers);
    if (a.n_floor < 1 || a.n_cap < a.n_floor) raise(ErrorCode::ConfigError, "need 1 <= --n-floor <= --n-cap");

    QptOptions o;
    o.omega_over_gamma = a.omega_over_gamma;
    o.qutrit_ratio = a.qutrit_ratio;
    o.bias = a.bias;
    o.convention = parse_convention(a.convention);
    const TruncationPolicy policy = a.n_max > 0 ? TruncationPolicy::fixed(a.n_max) : TruncationPolicy::adaptive(a.n_floor, a.n_cap);
    const ScanResult r = scan_qpt(qpt_grid(ga, o, policy), o, a.workers);

    std::map<std::string, int> hosts;
    std::vector<double> g, v;
    for (const ScanPoint& p : r.points) {
        if (!p.ok()) continue;
        ++hosts[p.host_block];
        g.push_back(p.coord1);
        v.push_back(p.record.n_rescaled);
    }
    err << "qpt-scan: " << r.points.size() << " points, " << r.failed() << " failed, "
        << format_double(r.provenance.wall_seconds) << " s\n";
    for (const auto& [h, n] : hosts) err << "  ground in " << h << ": " << n << "\n";
    std::map<std::string, std::string> extra = {{"command", "qpt-scan"}, {"unit", a.unit}, {"g_convention", a.convention}};
    if (r.failed() == 0) {
        try {
            const CriticalPoint cp = estimate_critical_point(g, v);
            err << "  g_star = " << format_double(cp.g_star) << "\n";
            extra["g_star"] = format_double(cp.g_star);
        } catch (const Error& e) {
            err << "  g_star unavailable: " << e.what() << "\n";
        }
    } else {
        err << "  g_star skipped: grid has failed points\n";
    }

    emit(a.output, qpt_csv(r), out);
    if (!to_stdout(a.output)) write_file_atomic(sidecar_path(a.output), sidecar_json(r, extra));
    return r.failed_fraction() > 0.05 ? kNumericalError : kOk;
}

// ---------------------------------------------------------------------------

struct CrossingArgs {
    double x_min = 0.0;
    double x_max = 0.5;
    int samples = 101;
    std::string output;
};

int cmd_crossing_lines(const CrossingArgs& a, std::ostream& out, std::ostream& err) {
    std::string csv = "family_a,family_b,omega_over_gamma,x\n";
    for (const BoundaryPoint& b : phase_boundaries(a.x_min, a.x_max, a.samples)) {
        csv += std::string(to_string(b.a)) + "," + std::string(to_string(b.b)) + "," + format_double(b.omega_over_gamma) +
               "," + format_double(b.x) + "\n";
    }
    emit(a.output, csv, out);
    for (const TriplePoint& tp : triple_points()) {
        err << "triple point (" << format_double(tp.omega_over_gamma) << ", " << format_double(tp.x) << ")\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::vector<int> only;
    std::uint64_t seed = 20240611;
    double bias = 1e-8;
    std::string convention = "reconciled";
    int workers = 0;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
    check_workers(a.workers);
    for (int id : a.only)
        if (id < 1 || id > kCriterionCount) raise(ErrorCode::ConfigError, "--only takes criteria 1.." + std::to_string(kCriterionCount));
    ValidationOptions o;
    o.workers = a.workers;
    o.seed = a.seed;
    o.bias = a.bias;
    o.convention = parse_convention(a.convention);
    o.only = a.only;
    int passed = 0, total = 0;
    run_validation(o, [&](const CriterionResult& r) {
        out << format_result(r) << std::flush;
        ++total;
        if (r.pass) ++passed;
    });
    out << passed << "/" << total << " criteria passed\n";
    err << "validate: seed " << a.seed << ", bias " << a.bias << ", workers " << a.workers << "\n";
    return passed == total ? kOk : kValidationFailed;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-qutrit quantum Rabi model: spectra, phase-diagram and QPT scans"};
    app.require_subcommand(1);
    const int workers_default = default_workers();

    SpectrumArgs sa;
    auto* spectrum = app.add_subcommand("spectrum", "Lowest levels of the full Hamiltonian or one sector");
    auto* params_opt = spectrum->add_option("--params", sa.params, "JSON parameter file");
    auto* preset_opt = spectrum->add_option("--preset", sa.preset, "level-crossing | qpt");
    spectrum->add_option("--omega", sa.omega, "qutrit frequency Omega");
    spectrum->add_option("--gamma", sa.gamma, "qutrit-qutrit coupling gamma");
    spectrum->add_option("--lambda", sa.lambda, "qutrit-mode coupling lambda");
    spectrum->add_option("--omega-mode", sa.omega_mode, "mode frequency omega");
    spectrum->add_option("--n-max", sa.n_max, "highest Fock level (overrides the parameter file)");
    spectrum->add_option("--sector", sa.sector, "full | K=+1 | K=-1 | m=-2..m=+2");
    spectrum->add_option("--levels", sa.levels, "number of levels");
    spectrum->add_option("--bias", sa.bias, "bias on (S1z - S2z) for sector solves");
    spectrum->add_option("--residual-tol", sa.residual_tol, "accepted residual relative to ||H||");
    spectrum->add_option("-o,--output", sa.output, "CSV path (default stdout)");
    params_opt->excludes(preset_opt);
    preset_opt->excludes(params_opt);

    PhaseArgs pa;
    pa.workers = workers_default;
    auto* phase = app.add_subcommand("phase-diagram", "Ground-state sectors over (Omega/gamma, x)");
    phase->add_option("--grid", pa.grid, "omega:min:max:count,x:min:max:count");
    phase->add_option("--omega-over-gamma", pa.omega_over_gamma, "mode frequency in units of gamma");
    phase->add_option("--n-max", pa.n_max, "highest Fock level");
    phase->add_option("-o,--output", pa.output, "CSV path; a .json sidecar is written next to it");
    phase->add_option("--unit", pa.unit, "energy unit recorded in the sidecar");
    phase->add_option("--workers", pa.workers, "worker threads (env QUTRIT_RABI_WORKERS)");

    QptArgs qa;
    qa.workers = workers_default;
    auto* qpt = app.add_subcommand("qpt-scan", "Ground state of the QPT preset over g");
    qpt->add_option("--g", qa.g, "min:max:count");
    qpt->add_option("--omega-over-gamma", qa.omega_over_gamma, "mode frequency in units of gamma");
    qpt->add_option("--qutrit-ratio", qa.qutrit_ratio, "Omega/gamma");
    qpt->add_option("--bias", qa.bias, "symmetry-breaking bias in units of gamma");
    qpt->add_option("--n-max", qa.n_max, "fixed truncation (default: adaptive)");
    qpt->add_option("--n-floor", qa.n_floor, "smallest adaptive truncation");
    qpt->add_option("--n-cap", qa.n_cap, "largest adaptive truncation");
    qpt->add_option("--convention", qa.convention, "reconciled | printed");
    qpt->add_option("-o,--output", qa.output, "CSV path; a .json sidecar is written next to it");
    qpt->add_option("--unit", qa.unit, "energy unit recorded in the sidecar");
    qpt->add_option("--workers", qa.workers, "worker threads (env QUTRIT_RABI_WORKERS)");

    CrossingArgs ca;
    auto* crossing = app.add_subcommand("crossing-lines", "Analytic phase-boundary polylines");
    crossing->add_option("--x-min", ca.x_min);
    crossing->add_option("--x-max", ca.x_max);
    crossing->add_option("--samples", ca.samples);
    crossing->add_option("-o,--output", ca.output, "CSV path (default stdout)");

    ValidateArgs va;
    va.workers = workers_default;
    auto* validate = app.add_subcommand("validate", "Run the acceptance checks");
    validate->add_option("--only", va.only, "criterion numbers to run")->delimiter(',');
    validate->add_option("--seed", va.seed);
    validate->add_option("--bias", va.bias);
    validate->add_option("--convention", va.convention, "reconciled | printed");
    validate->add_option("--workers", va.workers, "worker threads (env QUTRIT_RABI_WORKERS)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*spectrum) {
            if (sa.params.empty() && sa.preset.empty()) raise(ErrorCode::ConfigError, "spectrum needs --params or --preset");
            if (!sa.params.empty() && (!std::isnan(sa.omega) || !std::isnan(sa.gamma) || !std::isnan(sa.lambda))) {
                raise(ErrorCode::ConfigError, "--params cannot be combined with inline parameters");
            }
            return cmd_spectrum(sa, out, err);
        }
        if (*phase) return cmd_phase_diagram(pa, out, err);
        if (*qpt) return cmd_qpt_scan(qa, out, err);
        if (*crossing) return cmd_crossing_lines(ca, out, err);
        if (*validate) return cmd_validate(va, out, err);
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumericalError;
    }
    return kConfigError;
}

} // namespace qrabi::cli
