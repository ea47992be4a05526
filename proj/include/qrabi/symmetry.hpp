#pragma once

// Conserved quantities and invariant sectors.
//
// K = cos(pi Sigma_tot^z) is conserved for every parameter choice and splits the
// product basis into K = -1 (4 qutrit pairs) and K = +1 (5 pairs). When
// gamma_x = gamma_y, Sigma_tot^z itself is conserved and each K sector splits
// further by m = m1 + m2.

#include "qrabi/banded.hpp"
#include "qrabi/model.hpp"
#include "qrabi/ops.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qrabi {

struct SectorLabel {
    enum class Kind { Full, K, M };

    Kind kind = Kind::Full;
    int value = 0; ///< +-1 for K, -2..2 for M

    static SectorLabel full() { return {Kind::Full, 0}; }
    static SectorLabel k(int value);
    static SectorLabel m(int value);
    /// Accepts "full", "K=+1", "K=-1", "m=-2" ... "m=2" (with or without '+').
    static SectorLabel parse(std::string_view text);

    std::string to_string() const;
    /// Whether a product state with total projection `m_total` belongs to the sector.
    bool contains(int m_total) const;

    friend bool operator==(const SectorLabel&, const SectorLabel&) = default;
};

struct SectorBasis {
    SectorLabel label;
    int n_max = 1;
    std::vector<Index> indices;                   ///< product-basis indices, pair-major then Fock
    std::vector<std::pair<int, int>> qutrit_states; ///< (m1, m2) of each pair in the sector
    std::vector<int> pairs;                        ///< pair slot i1*3 + i2 for each qutrit state

    Index size() const { return static_cast<Index>(indices.size()); }
    Index boson_dim() const { return n_max + 1; }
    Index num_pairs() const { return static_cast<Index>(pairs.size()); }
};

QMatrix sigma_tot_z(const Truncation& t);
QMatrix k_operator(const Truncation& t);

/// Sector membership from the exact diagonal of Sigma_tot^z.
SectorBasis sector_basis(SectorLabel label, const Truncation& t);
/// As above, but m-labeled sectors are refused (SymmetryBroken) unless |gx - gy| <= 1e-14.
SectorBasis sector_basis(SectorLabel label, const Truncation& t, const ModelParams& p);

/// The five m sectors (m = -2..2) or the two K sectors (K = -1, +1).
std::vector<SectorBasis> m_sectors(const Truncation& t);
std::vector<SectorBasis> k_sectors(const Truncation& t);
/// m sectors when gx = gy, otherwise K sectors.
std::vector<SectorBasis> finest_partition(const ModelParams& p, const Truncation& t);

/// Sub-matrix of a full-space operator on the sector rows and columns.
QMatrix project(const QMatrix& h, const SectorBasis& s);
/// Re-embeds a sector vector into the full product basis.
CVector embed(const CVector& v, const SectorBasis& s);
/// Restricts a full-basis vector to the sector components.
CVector restrict_to(const CVector& v, const SectorBasis& s);

/// ||AB - BA||_F / (||A||_F ||B||_F); zero when either operand vanishes.
double commutator_norm(const QMatrix& a, const QMatrix& b);

/// Sector block of the Hamiltonian assembled directly from the qutrit-pair factors,
/// without forming the full matrix. `stagger_bias` adds bias (S1z - S2z).
QMatrix build_sector_block(const ModelParams& p, const Truncation& t, const SectorBasis& s,
                           double stagger_bias = 0.0);

/// Same block in Fock-major band storage (requires real matrix elements).
BandedSymmetric build_sector_banded(const ModelParams& p, const Truncation& t, const SectorBasis& s,
                                    double stagger_bias = 0.0);

} // namespace qrabi
