#pragma once

// Hamiltonian parameters and builders for the two-qutrit Rabi model
//
//   H = W1 S1z + W2 S2z + gx S1x S2x + gy S1y S2y + gz S1z S2z
//       + w a^dagger a + sum_k l_k (a^dagger + a) Skz
//
// and for the reduced Hamiltonians acting on its invariant sectors.

#include "qrabi/ops.hpp"

#include <cmath>

namespace qrabi {

struct ModelParams {
    double omega1 = 0.0;  ///< qutrit-1 frequency
    double omega2 = 0.0;  ///< qutrit-2 frequency
    double gamma_x = 0.0;
    double gamma_y = 0.0;
    double gamma_z = 0.0;
    double omega_mode = 1.0; ///< boson frequency, > 0
    double lambda1 = 0.0;
    double lambda2 = 0.0;

    double omega_plus() const { return 0.5 * (omega1 + omega2); }
    double omega_minus() const { return 0.5 * (omega1 - omega2); }
    double gamma_plus() const { return gamma_x + gamma_y; }
    double gamma_minus() const { return gamma_x - gamma_y; }
    double lambda_plus() const { return 0.5 * (lambda1 + lambda2); }
    double lambda_minus() const { return 0.5 * (lambda1 - lambda2); }
    double alpha1() const { return lambda1 / omega_mode; }
    double alpha2() const { return lambda2 / omega_mode; }

    /// Throws InvalidParam on non-finite entries or omega_mode <= 0.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// How the control parameter g maps onto the coupling lambda of the QPT preset.
enum class GConvention {
    /// g = lambda / sqrt(omega gamma): criticality of the effective Rabi model at g = 1.
    Reconciled,
    /// g = 2 lambda / sqrt(omega gamma) read literally with the preset's lambda.
    Printed,
};

struct QptParams {
    double Omega = 0.0;
    double gamma = 1.0;
    double lambda = 0.0;
    double omega_mode = 1.0;

    double g() const { return lambda / std::sqrt(omega_mode * gamma); }
    static QptParams from_g(double Omega, double gamma, double omega_mode, double g,
                            GConvention convention = GConvention::Reconciled);
    void validate() const;
};

enum class QptPhase { Normal, Superradiant };

/// W1 = W2 = Omega, gx = gy = gamma, gz = 0, l1 = l2 = lambda.
ModelParams preset_level_crossing(double Omega, double gamma, double lambda, double omega_mode);
/// W1 = W2 = Omega, gx = gy = gamma/2, gz = 0, l1 = -l2 = lambda/2.
ModelParams preset_qpt(double Omega, double gamma, double lambda, double omega_mode);
ModelParams preset_qpt(const QptParams& q);

/// Full Hamiltonian on qutrit (x) qutrit (x) boson, dimension 9 (n_max + 1).
QMatrix build_full(const ModelParams& p, const Truncation& t);

/// Two fictitious qubits (a, b) plus the mode on the K = -1 sector, dimension 4 (n_max + 1),
/// basis |++>, |+->, |-+>, |--> <-> |10>, |01>, |0-1>, |-10>.
QMatrix build_h0_effective(const ModelParams& p, const Truncation& t);

/// Hamiltonian on the Sigma_tot^z = 0 sector (|1-1>, |00>, |-11>) (x) Fock, dimension 3 (n_max + 1).
/// Requires gz = 0 and gx = gy.
QMatrix build_h3(const ModelParams& p, const Truncation& t);

/// Quadratic boson Hamiltonian  w a^dagger a - c (a + a^dagger)^2 + const  of the lower
/// (sigma_a^z = -1) branch in the normal or superradiant phase.
QMatrix build_np_sp_effective(const QptParams& q, const Truncation& t, QptPhase phase);

/// Decomposition H = constant (x) 1 + 1 (x) w a^dagger a + coupling (x) (a + a^dagger)
/// with 9x9 qutrit-pair factors; `stagger_bias` adds bias (S1z - S2z) to the constant part.
struct QutritTerms {
    CMatrix constant;
    CMatrix coupling;
};
QutritTerms qutrit_terms(const ModelParams& p, double stagger_bias = 0.0);

} // namespace qrabi
