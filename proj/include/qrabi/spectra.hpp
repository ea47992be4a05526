#pragma once

#include "qrabi/banded.hpp"
#include "qrabi/model.hpp"
#include "qrabi/ops.hpp"
#include "qrabi/symmetry.hpp"

#include <span>
#include <vector>

namespace qrabi {

/// Ascending eigenvalues with canonical-phase eigenvectors and residuals ||H v - E v||.
struct EigenSet {
    std::vector<double> values;
    std::vector<StateVector> vectors;
    std::vector<double> residuals;
    double norm = 0.0; ///< spectral norm of the input, max |E|
};

struct GroundState {
    double energy = 0.0;
    StateVector state;
    double gap = 0.0; ///< E1 - E0, reported as 0 when below 1e-10 ||H||
};

/// Full dense Hermitian eigendecomposition. Requires hermitian_hint.
EigenSet eigh(const QMatrix& h);
GroundState ground(const QMatrix& h);

/// Lowest `count` eigenpairs of a real symmetric band matrix: bisection on LDL^T
/// inertia counts for the values, shifted inverse iteration for the vectors. Vectors come back in the caller's ordering (BandedSymmetric::order).
EigenSet lowest_banded(const BandedSymmetric& b, int count);

/// Lowest `count` levels of one sector block. Small blocks are solved densely,
/// large real ones through the band path.
EigenSet sector_lowest(const ModelParams& p, const Truncation& t, const SectorBasis& s, int count,
                       double stagger_bias = 0.0);

/// Global ground energy over the finest available symmetry partition.
double ground_energy(const ModelParams& p, const Truncation& t);

struct ConvergedGround {
    int n_star = 0;
    double energy = 0.0;
};

/// Smallest n in the strictly increasing `n_seq` whose ground energy agrees with the
/// next entry's within `tol`. Throws NotConverged with the last delta otherwise.
ConvergedGround converge_ground(const ModelParams& p, std::span<const int> n_seq, double tol);

/// Dense size above which sector_lowest switches to the band solver.
inline constexpr Index kDenseSectorLimit = 400;

} // namespace qrabi
