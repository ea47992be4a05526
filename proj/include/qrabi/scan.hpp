#pragma once

// Parameter sweeps: the level-crossing phase diagram in (Omega/gamma, x = lambda^2/(gamma w))
// and the QPT scan in g, plus kink-based critical point estimation.

#include "qrabi/model.hpp"
#include "qrabi/observables.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qrabi {

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    int count = 2;

    /// min + i (max - min)/(count - 1); the last value is exactly max.
    double value(int i) const;
    double step() const { return (max - min) / (count - 1); }
    std::vector<double> values() const;
};

struct TruncationPolicy {
    enum class Kind { Fixed, Adaptive };
    Kind kind = Kind::Fixed;
    int n_max = 48;         ///< Fixed: the truncation; Adaptive: the floor
    int n_cap = 16384;      ///< Adaptive: points needing more are marked failed
    double tail_tol = 1e-10; ///< Adaptive: allowed ground-state weight on the top eighth of the Fock ladder

    static TruncationPolicy fixed(int n_max) { return {Kind::Fixed, n_max, n_max, 1e-10}; }
    static TruncationPolicy adaptive(int floor = 64, int cap = 16384) { return {Kind::Adaptive, floor, cap, 1e-10}; }
};

struct GridSpec {
    Axis axis1;
    std::optional<Axis> axis2;
    std::map<std::string, double> fixed;
    TruncationPolicy truncation;

    /// Throws InvalidParam unless every axis has count >= 2 and min < max.
    void validate() const;
    std::size_t size() const;
};

struct Provenance {
    std::string version;
    std::map<std::string, double> tolerances;
    double wall_seconds = 0.0;
};

/// One grid point. `status` is "ok" or the ErrorCode name of the failure.
struct ScanPoint {
    double coord1 = 0.0;
    double coord2 = 0.0;
    int n_max = 0;
    GroundRecord record;
    int label = 0;           ///< phase diagram: round(m_total)
    double energy_h3 = 0.0;  ///< QPT: ground of the Sigma_tot^z = 0 block
    std::string host_block;  ///< QPT: "H_minus" or "H3_prime", whichever is lower
    std::string status = "ok";
    std::string message;

    bool ok() const { return status == "ok"; }
};

/// Records in row-major order: axis1 outer, axis2 inner.
struct ScanResult {
    GridSpec grid;
    std::vector<ScanPoint> points;
    Provenance provenance;

    std::size_t failed() const;
    double failed_fraction() const;
};

/// Runs body(i) for i in [0, n) on `workers` threads; each index is visited exactly once.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

/// Default worker count: QUTRIT_RABI_WORKERS if set and positive, else hardware concurrency.
int default_workers();

// ---------------------------------------------------------------------------
// Phase diagram

/// gamma = 1; axis1 is Omega/gamma, axis2 is x. Truncation must be Fixed.
GridSpec phase_diagram_grid(Axis omega_axis, Axis x_axis, double omega_over_gamma, int n_max);
/// 61 x 61 over Omega/gamma in [-1.2, 1.2], x in [0.001, 0.5], w/gamma = 1, n_max = 48.
GridSpec default_phase_diagram_grid();

ScanPoint phase_diagram_point(double omega_over_gamma_qutrit, double x, double omega_over_gamma, int n_max);
ScanResult scan_phase_diagram(const GridSpec& grid, int workers);

// ---------------------------------------------------------------------------
// QPT

struct QptOptions {
    double omega_over_gamma = 1e-2; ///< w / gamma
    double qutrit_ratio = 1.0;      ///< Omega / gamma
    double bias = 1e-8;             ///< in units of gamma, applied as bias (S1z - S2z) to the m = -1 block
    GConvention convention = GConvention::Reconciled;
};

/// Photon-number driven floor for the m = -1 block: max(floor, ceil(9 (g^2 - g^-2)/4 gamma/w)).
int qpt_truncation_rule(double g, double omega_over_gamma, int floor);

GridSpec qpt_grid(Axis g_axis, const QptOptions& opts, TruncationPolicy policy = TruncationPolicy::adaptive());
ScanPoint qpt_point(double g, const QptOptions& opts, const TruncationPolicy& policy);
ScanResult scan_qpt(const GridSpec& grid, const QptOptions& opts, int workers);

// ---------------------------------------------------------------------------
// Critical point

struct CriticalPoint {
    double g_star = 0.0;
    std::size_t index = 0;             ///< position of g_star in the input
    std::vector<double> second_diff;   ///< |v[i-1] - 2 v[i] + v[i+1]| for i = 1..n-2
};

/// Location of the largest |second difference| of a uniformly sampled curve.
/// Throws TooFewPoints below 7 samples, InvalidParam on non-uniform spacing and
/// TooFewFeatures when the curve has no curvature above round-off.
CriticalPoint estimate_critical_point(std::span<const double> g, std::span<const double> value);

// ---------------------------------------------------------------------------
// Output

std::string phase_diagram_csv(const ScanResult& r);
std::string qpt_csv(const ScanResult& r);
std::string sidecar_json(const ScanResult& r, const std::map<std::string, std::string>& extra = {});

/// Library version stamped into provenance.
std::string version();

} // namespace qrabi
