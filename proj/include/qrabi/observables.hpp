#pragma once

#include "qrabi/ops.hpp"
#include "qrabi/symmetry.hpp"

#include <string>

namespace qrabi {

/// Ground energy plus the order parameters at one parameter point.
struct GroundRecord {
    double energy = 0.0;
    double gap = 0.0;
    double m_total = 0.0;     ///< <S1z + S2z>
    double m_half = 0.0;      ///< m_total / 2
    double m_stag = 0.0;      ///< <(S1z - S2z)/2>
    double mean_photon = 0.0;
    double n_rescaled = 0.0;  ///< mean_photon * omega/gamma
    double negativity = 0.0;
    double quad_var_x = 0.0;
    std::string sector;
};

enum class TransposedQutrit { First, Second };

/// 9x9 qutrit-pair density matrix after tracing out the mode. `v` is expressed in
/// the basis `s` (use the "full" sector for product-basis vectors).
CMatrix reduce_to_qutrits(const StateVector& v, const SectorBasis& s);

/// Sum of |negative eigenvalues| of the partial transpose. Throws InvalidState if the
/// trace differs from 1 by more than 1e-8.
double negativity(const CMatrix& rho, TransposedQutrit which = TransposedQutrit::Second);

struct Magnetizations {
    double m_total = 0.0;
    double m_half = 0.0;
    double m_stag = 0.0;
};

Magnetizations magnetizations(const StateVector& v, const SectorBasis& s);
double mean_photon(const StateVector& v, const SectorBasis& s);

struct QuadratureVariances {
    double var_x = 0.0; ///< x = (a + a^dagger)/sqrt2
    double var_p = 0.0; ///< p = i(a^dagger - a)/sqrt2
};
QuadratureVariances quad_variances(const StateVector& v, const SectorBasis& s);

/// All observables of `v` in one record; n_rescaled uses `omega_over_gamma` (omega/gamma).
GroundRecord make_record(double energy, double gap, const StateVector& v, const SectorBasis& s,
                         double omega_over_gamma);

} // namespace qrabi
