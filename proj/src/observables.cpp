#include "qrabi/observables.hpp"

#include "qrabi/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace qrabi {

namespace {

/// Amplitudes as a (pairs in sector) x (Fock levels) matrix.
CMatrix amplitude_grid(const StateVector& v, const SectorBasis& s) {
    if (v.dim() != s.size()) {
        raise(ErrorCode::DimMismatch, "state of dimension " + std::to_string(v.dim()) + " does not match basis of size " +
                                          std::to_string(s.size()));
    }
    const Index nb = s.boson_dim();
    CMatrix grid(s.num_pairs(), nb);
    for (Index q = 0; q < s.num_pairs(); ++q)
        for (Index n = 0; n < nb; ++n) grid(q, n) = v[q * nb + n];
    return grid;
}

} // namespace

CMatrix reduce_to_qutrits(const StateVector& v, const SectorBasis& s) {
    const CMatrix grid = amplitude_grid(v, s);
    const CMatrix local = grid * grid.adjoint();
    CMatrix rho = CMatrix::Zero(kPairDim, kPairDim);
    for (Index i = 0; i < s.num_pairs(); ++i)
        for (Index j = 0; j < s.num_pairs(); ++j) rho(s.pairs[i], s.pairs[j]) = local(i, j);
    return rho;
}

double negativity(const CMatrix& rho, TransposedQutrit which) {
    if (rho.rows() != kPairDim || rho.cols() != kPairDim) raise(ErrorCode::DimMismatch, "negativity expects a 9x9 matrix");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-8) raise(ErrorCode::InvalidState, "density matrix trace " + std::to_string(tr));

    CMatrix pt(kPairDim, kPairDim);
    for (int i1 = 0; i1 < 3; ++i1)
        for (int i2 = 0; i2 < 3; ++i2)
            for (int j1 = 0; j1 < 3; ++j1)
                for (int j2 = 0; j2 < 3; ++j2) {
                    const int row = i1 * 3 + i2, col = j1 * 3 + j2;
                    if (which == TransposedQutrit::Second) {
                        pt(row, col) = rho(i1 * 3 + j2, j1 * 3 + i2);
                    } else {
                        pt(row, col) = rho(j1 * 3 + i2, i1 * 3 + j2);
                    }
                }
    // Symmetrize away round-off so the Hermitian solver sees an exact Hermitian input.
    const CMatrix herm = 0.5 * (pt + pt.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) raise(ErrorCode::ConvergenceFailure, "partial-transpose spectrum failed");
    double sum = 0.0;
    for (Index k = 0; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()(k) < 0.0) sum -= es.eigenvalues()(k);
    return sum;
}

Magnetizations magnetizations(const StateVector& v, const SectorBasis& s) {
    const CMatrix grid = amplitude_grid(v, s);
    Magnetizations out;
    double total = 0.0, stag = 0.0;
    for (Index q = 0; q < s.num_pairs(); ++q) {
        const double w = grid.row(q).squaredNorm();
        const auto [m1, m2] = s.qutrit_states[static_cast<std::size_t>(q)];
        total += w * (m1 + m2);
        stag += w * 0.5 * (m1 - m2);
    }
    out.m_total = total;
    out.m_half = 0.5 * total;
    out.m_stag = stag;
    return out;
}

double mean_photon(const StateVector& v, const SectorBasis& s) {
    const CMatrix grid = amplitude_grid(v, s);
    double n_mean = 0.0;
    for (Index n = 0; n < grid.cols(); ++n) n_mean += static_cast<double>(n) * grid.col(n).squaredNorm();
    return n_mean;
}

QuadratureVariances quad_variances(const StateVector& v, const SectorBasis& s) {
    const CMatrix grid = amplitude_grid(v, s);
    const Index nb = grid.cols();
    Complex a1(0.0), a2(0.0);
    double n_mean = 0.0;
    for (Index n = 0; n < nb; ++n) {
        n_mean += static_cast<double>(n) * grid.col(n).squaredNorm();
        if (n + 1 < nb) a1 += std::sqrt(static_cast<double>(n + 1)) * grid.col(n).dot(grid.col(n + 1));
        if (n + 2 < nb) a2 += std::sqrt(static_cast<double>((n + 1) * (n + 2))) * grid.col(n).dot(grid.col(n + 2));
    }
    const double x_mean = std::sqrt(2.0) * a1.real();
    const double p_mean = std::sqrt(2.0) * a1.imag();
    const double x2 = (2.0 * a2.real() + 2.0 * n_mean + 1.0) / 2.0;
    const double p2 = (-2.0 * a2.real() + 2.0 * n_mean + 1.0) / 2.0;
    return {x2 - x_mean * x_mean, p2 - p_mean * p_mean};
}

GroundRecord make_record(double energy, double gap, const StateVector& v, const SectorBasis& s,
                         double omega_over_gamma) {
    GroundRecord r;
    r.energy = energy;
    r.gap = gap;
    const Magnetizations m = magnetizations(v, s);
    r.m_total = m.m_total;
    r.m_half = m.m_half;
    r.m_stag = m.m_stag;
    r.mean_photon = mean_photon(v, s);
    r.n_rescaled = r.mean_photon * omega_over_gamma;
    r.negativity = negativity(reduce_to_qutrits(v, s));
    r.quad_var_x = quad_variances(v, s).var_x;
    r.sector = s.label.to_string();
    return r;
}

} // namespace qrabi
