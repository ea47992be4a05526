#pragma once

// Closed-form eigenpairs of the symmetric two-qutrit Rabi model, the ground-state
// level-crossing geometry, and the effective-oscillator results for the QPT preset.

#include "qrabi/model.hpp"
#include "qrabi/ops.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace qrabi {

/// The five n = 0 ground-state candidates of the level-crossing preset.
enum class Family { ThetaMinus, PsiMinusMinus, PhiMinus, PsiPlusMinus, ThetaPlus };

std::string_view to_string(Family f);

struct CandidateGS {
    Family family;
    int m_total;
    double negativity;
    double photon_factor; ///< mean photon number / alpha^2

    /// Energy for Omega, gamma, omega_mode, lambda (level-crossing preset).
    double energy(double Omega, double gamma, double omega_mode, double lambda) const;
    double mean_photon(double alpha) const { return photon_factor * alpha * alpha; }
};

const std::array<CandidateGS, 5>& ground_candidates();
const CandidateGS& candidate(Family f);

/// Candidate energy in units of gamma as a function of Omega/gamma and x = lambda^2/(gamma omega).
double candidate_energy(Family f, double omega_over_gamma, double x);
/// Analytic ground family (argmin; ties go to the earlier family in enumeration order).
Family ground_family(double omega_over_gamma, double x);

struct AnalyticState {
    StateVector state; ///< full product basis, dimension 9 (n_max + 1)
    double energy = 0.0;
};

enum class PsiBranch { PlusPlus, PlusMinus, MinusPlus, MinusMinus };
enum class PhiBranch { Plus, Minus, Zero };
enum class ThetaBranch { Plus, Minus };

/// (|10> +- |01>)/sqrt2 (x) D(-alpha)|n>  or  (|0-1> +- |-10>)/sqrt2 (x) D(alpha)|n>.
AnalyticState psi_state(int n, PsiBranch branch, const ModelParams& p, const Truncation& t);
/// (|1-1> +- sqrt2|00> + |-11>)/2 (x) |n>  or  (|1-1> - |-11>)/sqrt2 (x) |n>.
AnalyticState phi_state(int n, PhiBranch branch, const ModelParams& p, const Truncation& t);
/// |11> (x) D(-2 alpha)|n>  or  |-1-1> (x) D(2 alpha)|n>.
AnalyticState theta_state(int n, ThetaBranch branch, const ModelParams& p, const Truncation& t);

/// Ground-candidate degeneracy line  Omega/gamma = intercept + slope * x.
struct CrossingLine {
    Family a;
    Family b;
    double intercept;
    double slope;

    double omega_over_gamma(double x) const { return intercept + slope * x; }
};

std::vector<CrossingLine> crossing_lines();

struct TriplePoint {
    double omega_over_gamma;
    double x;
    std::array<Family, 3> families;
};

/// (0, sqrt2/4) and (+-(3 sqrt2 - 4)/2, (2 - sqrt2)/2).
std::vector<TriplePoint> triple_points();

/// Polyline samples of the actual phase boundaries: points of each crossing line
/// for x in [x_min, x_max] where its two families are jointly the ground.
struct BoundaryPoint {
    Family a;
    Family b;
    double omega_over_gamma;
    double x;
};
std::vector<BoundaryPoint> phase_boundaries(double x_min, double x_max, int samples);

// --- QPT preset --------------------------------------------------------------

enum class SpBranch { Plus, Minus };

/// Ground energy of the lower-branch effective oscillator (normal g < 1, superradiant g > 1).
double qpt_ground_energy(const QptParams& q, QptPhase phase);

double squeeze_parameter(double g, QptPhase phase);

/// Squeezed vacuum (x) fictitious-qubit state in the full product basis.
AnalyticState qpt_ground(const QptParams& q, QptPhase phase, SpBranch branch, const Truncation& t);

/// Order parameters in the gamma/omega -> infinity limit. `printed` and `derived`
/// variants disagree in the superradiant phase; both are kept. Staggered values are for
/// the Plus branch; the Minus branch flips their sign.
struct QptObservables {
    double n_rescaled = 0.0;
    double negativity_printed = 0.0;
    double negativity_derived = 0.0;
    double stag_printed = 0.0;  ///< +-sqrt(1 - g^-2)
    double stag_derived = 0.0;  ///< <sigma_b^z> = -+sqrt(1 - g^-4)
};
QptObservables qpt_observables(double g, QptPhase phase);

struct RescaledEnergy {
    double derived = 0.0;
    double printed = 0.0;
};
/// E * omega/gamma in the gamma/omega -> infinity limit; `qutrit_ratio` is Omega/gamma.
RescaledEnergy qpt_rescaled_energy(double g, double omega_mode, double qutrit_ratio);

} // namespace qrabi
