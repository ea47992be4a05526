#include "qrabi/scan.hpp"

#include "qrabi/error.hpp"
#include "qrabi/io.hpp"
#include "qrabi/spectra.hpp"
#include "qrabi/symmetry.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#ifndef QRABI_VERSION
#define QRABI_VERSION "0.0.0"
#endif

namespace qrabi {

std::string version() { return QRABI_VERSION; }

double Axis::value(int i) const {
    if (i == count - 1) return max;
    return min + i * step();
}

std::vector<double> Axis::values() const {
    std::vector<double> v(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = value(i);
    return v;
}

namespace {

void validate_axis(const Axis& a) {
    if (a.count < 2) raise(ErrorCode::InvalidParam, "axis '" + a.name + "' needs count >= 2");
    if (!(a.min < a.max)) raise(ErrorCode::InvalidParam, "axis '" + a.name + "' needs min < max");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) raise(ErrorCode::InvalidParam, "axis '" + a.name + "' not finite");
}

constexpr double kDegenerateRel = 1e-10;

} // namespace

void GridSpec::validate() const {
    validate_axis(axis1);
    if (axis2) validate_axis(*axis2);
    if (truncation.n_max < 1) raise(ErrorCode::InvalidParam, "n_max must be >= 1");
    if (truncation.kind == TruncationPolicy::Kind::Adaptive && truncation.n_cap < truncation.n_max) {
        raise(ErrorCode::InvalidParam, "truncation cap below its floor");
    }
}

std::size_t GridSpec::size() const {
    return static_cast<std::size_t>(axis1.count) * static_cast<std::size_t>(axis2 ? axis2->count : 1);
}

std::size_t ScanResult::failed() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const ScanPoint& p) { return !p.ok(); }));
}

double ScanResult::failed_fraction() const {
    return points.empty() ? 0.0 : static_cast<double>(failed()) / static_cast<double>(points.size());
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
    workers = std::max(1, workers);
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> errored{false};
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || errored.load()) return;
            try {
                body(i);
            } catch (...) {
                if (!errored.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const auto count = static_cast<std::size_t>(workers) < n ? static_cast<std::size_t>(workers) : n;
    pool.reserve(count);
    for (std::size_t w = 0; w < count; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

int default_workers() {
    if (const char* env = std::getenv("QUTRIT_RABI_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

template <class F>
void guarded(ScanPoint& pt, F&& f) {
    try {
        f();
    } catch (const Error& e) {
        pt.status = std::string(to_string(e.code()));
        pt.message = e.what();
    } catch (const std::exception& e) {
        pt.status = "Failed";
        pt.message = e.what();
    }
}

double clean_gap(double gap, double norm) { return gap <= kDegenerateRel * norm ? 0.0 : gap; }

std::map<std::string, double> base_tolerances() {
    return {{"residual_tol", Truncation{}.residual_tol}, {"degenerate_gap_rel", kDegenerateRel}};
}

} // namespace

// ---------------------------------------------------------------------------
// Phase diagram

GridSpec phase_diagram_grid(Axis omega_axis, Axis x_axis, double omega_over_gamma, int n_max) {
    GridSpec g;
    omega_axis.name = "Omega/gamma";
    x_axis.name = "x";
    g.axis1 = std::move(omega_axis);
    g.axis2 = std::move(x_axis);
    g.fixed["omega/gamma"] = omega_over_gamma;
    g.truncation = TruncationPolicy::fixed(n_max);
    return g;
}

GridSpec default_phase_diagram_grid() {
    return phase_diagram_grid({"", -1.2, 1.2, 61}, {"", 0.001, 0.5, 61}, 1.0, 48);
}

ScanPoint phase_diagram_point(double qutrit_ratio, double x, double omega_over_gamma, int n_max) {
    ScanPoint pt;
    pt.coord1 = qutrit_ratio;
    pt.coord2 = x;
    pt.n_max = n_max;
    guarded(pt, [&] {
        if (x < 0.0) raise(ErrorCode::InvalidParam, "x must be non-negative");
        const ModelParams p = preset_level_crossing(qutrit_ratio, 1.0, std::sqrt(x * omega_over_gamma), omega_over_gamma);
        const Truncation t(n_max);
        const QMatrix h = build_full(p, t);

        std::vector<double> lowest;
        double norm = 0.0;
        double best = std::numeric_limits<double>::infinity();
        const SectorBasis* best_sector = nullptr;
        StateVector best_state;
        const std::vector<SectorBasis> sectors = m_sectors(t);
        for (const SectorBasis& s : sectors) {
            EigenSet es = eigh(project(h, s));
            norm = std::max(norm, es.norm);
            for (std::size_t k = 0; k < std::min<std::size_t>(2, es.values.size()); ++k) lowest.push_back(es.values[k]);
            if (es.values[0] < best) {
                best = es.values[0];
                best_sector = &s;
                best_state = std::move(es.vectors[0]);
            }
        }
        std::sort(lowest.begin(), lowest.end());
        pt.record = make_record(best, clean_gap(lowest[1] - lowest[0], norm), best_state, *best_sector,
                                omega_over_gamma);
        pt.label = static_cast<int>(std::lround(pt.record.m_total));
    });
    return pt;
}

ScanResult scan_phase_diagram(const GridSpec& grid, int workers) {
    grid.validate();
    if (!grid.axis2) raise(ErrorCode::InvalidParam, "phase diagram needs two axes");
    if (grid.truncation.kind != TruncationPolicy::Kind::Fixed) raise(ErrorCode::InvalidParam, "phase diagram needs a fixed n_max");
    const auto it = grid.fixed.find("omega/gamma");
    const double ratio = it == grid.fixed.end() ? 1.0 : it->second;
    if (!(ratio > 0.0)) raise(ErrorCode::InvalidParam, "omega/gamma must be positive");

    const auto t0 = std::chrono::steady_clock::now();
    ScanResult r;
    r.grid = grid;
    r.points.resize(grid.size());
    const int n2 = grid.axis2->count;
    parallel_for(r.points.size(), workers, [&](std::size_t i) {
        const int i1 = static_cast<int>(i) / n2, i2 = static_cast<int>(i) % n2;
        r.points[i] = phase_diagram_point(grid.axis1.value(i1), grid.axis2->value(i2), ratio, grid.truncation.n_max);
    });
    r.provenance.version = version();
    r.provenance.tolerances = base_tolerances();
    r.provenance.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// ---------------------------------------------------------------------------
// QPT

int qpt_truncation_rule(double g, double omega_over_gamma, int floor) {
    if (g <= 1.0) return floor;
    const double n = std::ceil(9.0 * (g * g - 1.0 / (g * g)) / 4.0 / omega_over_gamma);
    return n > 1e9 ? std::numeric_limits<int>::max() : std::max(floor, static_cast<int>(n));
}

namespace {

/// Mean-field photon number of the Sigma_tot^z = 0 block, which turns superradiant
/// near g = 0.6 and displaces by lambda/w per unit |Sz|.
double h3_photon_estimate(double g, double omega_over_gamma) {
    const double n = g * g - 1.0 / (8.0 * g * g);
    return n > 0.0 ? n / omega_over_gamma : 0.0;
}

double fock_tail(const StateVector& v, const SectorBasis& s) {
    const Index nb = s.boson_dim();
    const Index from = nb - std::max<Index>(1, nb / 8);
    double w = 0.0;
    for (Index q = 0; q < s.num_pairs(); ++q)
        for (Index n = from; n < nb; ++n) w += std::norm(v[q * nb + n]);
    return w;
}

struct BlockSolve {
    EigenSet levels;
    SectorBasis basis;
    int n_max = 0;
};

BlockSolve solve_block(const ModelParams& p, SectorLabel label, int n_start, const TruncationPolicy& policy, double bias) {
    const bool adaptive = policy.kind == TruncationPolicy::Kind::Adaptive;
    int n = adaptive ? std::max(n_start, policy.n_max) : policy.n_max;
    for (;;) {
        if (adaptive && n > policy.n_cap) {
            raise(ErrorCode::TruncationTooSmall,
                  "needs n_max = " + std::to_string(n) + " above the cap " + std::to_string(policy.n_cap));
        }
        const Truncation t(n);
        BlockSolve out{sector_lowest(p, t, sector_basis(label, t), 2, bias), sector_basis(label, t), n};
        if (!adaptive || fock_tail(out.levels.vectors[0], out.basis) <= policy.tail_tol) return out;
        n = n >= policy.n_cap ? n + 1 : std::min(2 * n, policy.n_cap);
    }
}

} // namespace

GridSpec qpt_grid(Axis g_axis, const QptOptions& opts, TruncationPolicy policy) {
    GridSpec grid;
    g_axis.name = "g";
    grid.axis1 = std::move(g_axis);
    grid.fixed["omega/gamma"] = opts.omega_over_gamma;
    grid.fixed["Omega/gamma"] = opts.qutrit_ratio;
    grid.fixed["bias"] = opts.bias;
    grid.truncation = policy;
    return grid;
}

ScanPoint qpt_point(double g, const QptOptions& opts, const TruncationPolicy& policy) {
    ScanPoint pt;
    pt.coord1 = g;
    pt.coord2 = opts.omega_over_gamma;
    guarded(pt, [&] {
        if (!(opts.omega_over_gamma > 0.0)) raise(ErrorCode::InvalidParam, "omega/gamma must be positive");
        if (g < 0.0) raise(ErrorCode::InvalidParam, "g must be non-negative");
        const QptParams q = QptParams::from_g(opts.qutrit_ratio, 1.0, opts.omega_over_gamma, g, opts.convention);
        const ModelParams p = preset_qpt(q);
        const double ge = q.g();

        const BlockSolve lower = solve_block(p, SectorLabel::m(-1), qpt_truncation_rule(ge, opts.omega_over_gamma, 1),
                                             policy, opts.bias);
        const double n3 = h3_photon_estimate(ge, opts.omega_over_gamma);
        const BlockSolve middle = solve_block(p, SectorLabel::m(0), static_cast<int>(std::min(1e9, std::ceil(2.0 * n3))),
                                              policy, 0.0);

        const EigenSet& lv = lower.levels;
        pt.n_max = lower.n_max;
        pt.record = make_record(lv.values[0], clean_gap(lv.values[1] - lv.values[0], lv.norm), lv.vectors[0],
                                lower.basis, opts.omega_over_gamma);
        pt.energy_h3 = middle.levels.values[0];
        pt.host_block = pt.record.energy <= pt.energy_h3 ? "H_minus" : "H3_prime";
    });
    return pt;
}

ScanResult scan_qpt(const GridSpec& grid, const QptOptions& opts, int workers) {
    grid.validate();
    const auto t0 = std::chrono::steady_clock::now();
    ScanResult r;
    r.grid = grid;
    r.points.resize(grid.size());
    parallel_for(r.points.size(), workers,
                 [&](std::size_t i) { r.points[i] = qpt_point(grid.axis1.value(static_cast<int>(i)), opts, grid.truncation); });
    r.provenance.version = version();
    r.provenance.tolerances = base_tolerances();
    r.provenance.tolerances["fock_tail_tol"] = grid.truncation.tail_tol;
    r.provenance.tolerances["bias"] = opts.bias;
    r.provenance.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// ---------------------------------------------------------------------------
// Critical point

CriticalPoint estimate_critical_point(std::span<const double> g, std::span<const double> value) {
    if (g.size() != value.size()) raise(ErrorCode::DimMismatch, "g and value lengths differ");
    if (g.size() < 7) raise(ErrorCode::TooFewPoints, "need at least 7 samples, got " + std::to_string(g.size()));
    const double h = g[1] - g[0];
    if (!(h > 0.0)) raise(ErrorCode::InvalidParam, "g must increase");
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (std::abs((g[i] - g[i - 1]) - h) > 1e-6 * h) raise(ErrorCode::InvalidParam, "g samples are not uniformly spaced");
    }
    for (double v : value)
        if (!std::isfinite(v)) raise(ErrorCode::InvalidParam, "curve has non-finite values");

    const auto [lo, hi] = std::minmax_element(value.begin(), value.end());
    const double range = *hi - *lo;
    CriticalPoint out;
    out.second_diff.resize(g.size() - 2);
    double best = -1.0;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        const double d = std::abs(value[i - 1] - 2.0 * value[i] + value[i + 1]);
        out.second_diff[i - 1] = d;
        if (d > best) {
            best = d;
            out.index = i;
        }
    }
    if (!(range > 0.0) || best <= 1e-9 * range) raise(ErrorCode::TooFewFeatures, "curve has no resolvable kink");
    out.g_star = g[out.index];
    return out;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string num(const ScanPoint& p, double v) {
    return p.ok() ? format_double(v) : "nan";
}

nlohmann::json axis_json(const Axis& a) {
    return {{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count}};
}

} // namespace

std::string phase_diagram_csv(const ScanResult& r) {
    std::ostringstream out;
    out << "omega_over_gamma,x,energy,m_total,m_half,m_stag,mean_photon,negativity,gap,sector,status\n";
    for (const ScanPoint& p : r.points) {
        const GroundRecord& g = p.record;
        out << format_double(p.coord1) << ',' << format_double(p.coord2) << ',' << num(p, g.energy) << ','
            << num(p, g.m_total) << ',' << num(p, g.m_half) << ',' << num(p, g.m_stag) << ',' << num(p, g.mean_photon)
            << ',' << num(p, g.negativity) << ',' << num(p, g.gap) << ',' << (p.ok() ? g.sector : "") << ','
            << p.status << '\n';
    }
    return out.str();
}

std::string qpt_csv(const ScanResult& r) {
    std::ostringstream out;
    out << "g,omega_over_gamma,energy,energy_rescaled,n_mean,n_rescaled,negativity,m_stag,gap,host_block,status\n";
    for (const ScanPoint& p : r.points) {
        const GroundRecord& g = p.record;
        out << format_double(p.coord1) << ',' << format_double(p.coord2) << ',' << num(p, g.energy) << ','
            << num(p, g.energy * p.coord2) << ',' << num(p, g.mean_photon) << ',' << num(p, g.n_rescaled) << ','
            << num(p, g.negativity) << ',' << num(p, g.m_stag) << ',' << num(p, g.gap) << ','
            << (p.ok() ? p.host_block : "") << ',' << p.status << '\n';
    }
    return out.str();
}

std::string sidecar_json(const ScanResult& r, const std::map<std::string, std::string>& extra) {
    nlohmann::json grid;
    grid["axis1"] = axis_json(r.grid.axis1);
    if (r.grid.axis2) grid["axis2"] = axis_json(*r.grid.axis2);
    grid["fixed"] = r.grid.fixed;
    const TruncationPolicy& t = r.grid.truncation;
    if (t.kind == TruncationPolicy::Kind::Fixed) {
        grid["truncation"] = {{"kind", "fixed"}, {"n_max", t.n_max}};
    } else {
        grid["truncation"] = {{"kind", "adaptive"}, {"floor", t.n_max}, {"cap", t.n_cap}, {"tail_tol", t.tail_tol}};
    }

    nlohmann::json doc;
    doc["grid"] = grid;
    // Wall time stays out of the file so repeated runs produce identical bytes.
    doc["provenance"] = {{"version", r.provenance.version}, {"tolerances", r.provenance.tolerances}};
    doc["points"] = r.points.size();
    doc["failed"] = r.failed();
    nlohmann::json failures = nlohmann::json::array();
    for (const ScanPoint& p : r.points) {
        if (!p.ok()) failures.push_back({{"coord1", p.coord1}, {"coord2", p.coord2}, {"status", p.status}, {"message", p.message}});
    }
    doc["failures"] = failures;
    for (const auto& [k, v] : extra) doc[k] = v;
    return doc.dump(2) + "\n";
}

} // namespace qrabi
