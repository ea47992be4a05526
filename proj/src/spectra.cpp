#include "qrabi/spectra.hpp"

#include "qrabi/error.hpp"

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qrabi {

EigenSet eigh(const QMatrix& h) {
    if (!h.hermitian_hint()) raise(ErrorCode::NotHermitian, "eigh requires a matrix flagged Hermitian");
    const Index d = h.dim();
    RVector values;
    CMatrix vectors;
    if (d > 0 && h.mat().imag().cwiseAbs().maxCoeff() == 0.0) {
        // Real symmetric input (every sector block of the model): the real solver is several times faster.
        Eigen::SelfAdjointEigenSolver<RMatrix> es(h.mat().real());
        if (es.info() != Eigen::Success) raise(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
        values = es.eigenvalues();
        vectors = es.eigenvectors().cast<Complex>();
    } else {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(h.mat());
        if (es.info() != Eigen::Success) raise(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
        values = es.eigenvalues();
        vectors = es.eigenvectors();
    }

    EigenSet out;
    out.values.assign(values.data(), values.data() + d);
    if (d > 0) out.norm = std::max(std::abs(out.values.front()), std::abs(out.values.back()));
    const CMatrix r = h.mat() * vectors - vectors * values.cast<Complex>().asDiagonal();
    out.vectors.reserve(static_cast<std::size_t>(d));
    out.residuals.reserve(static_cast<std::size_t>(d));
    for (Index k = 0; k < d; ++k) {
        StateVector v(vectors.col(k));
        v.canonicalize_phase();
        out.vectors.push_back(std::move(v));
        out.residuals.push_back(r.col(k).norm());
    }
    return out;
}

GroundState ground(const QMatrix& h) {
    EigenSet es = eigh(h);
    if (es.values.empty()) raise(ErrorCode::DimMismatch, "ground of an empty matrix");
    GroundState g;
    g.energy = es.values[0];
    g.state = std::move(es.vectors[0]);
    if (es.values.size() > 1) {
        const double gap = es.values[1] - es.values[0];
        g.gap = gap <= 1e-10 * es.norm ? 0.0 : gap;
    }
    return g;
}

// ---------------------------------------------------------------------------
// Band path

namespace {

RVector band_matvec(const BandedSymmetric& b, const RVector& x) {
    RVector y = RVector::Zero(b.n);
    for (Index j = 0; j < b.n; ++j) {
        y(j) += b.lower(0, j) * x(j);
        const Index top = std::min<Index>(b.kd, b.n - 1 - j);
        for (Index d = 1; d <= top; ++d) {
            const double a = b.lower(d, j);
            if (a == 0.0) continue;
            y(j + d) += a * x(j);
            y(j) += a * x(j + d);
        }
    }
    return y;
}

/// Inverse iteration with shift just below `target`, orthogonalized against `previous`.
RVector inverse_iteration(const BandedSymmetric& b, double target, double scale, const std::vector<RVector>& previous) {
    const lapack_int n = static_cast<lapack_int>(b.n);
    const lapack_int kd = b.kd;
    const lapack_int ldab = 2 * kd + kd + 1;
    const double shift = target - 1e-13 * scale;

    RMatrix lu = RMatrix::Zero(ldab, b.n);
    for (Index j = 0; j < b.n; ++j) {
        const Index top = std::min<Index>(kd, b.n - 1 - j);
        for (Index d = 0; d <= top; ++d) {
            double a = b.lower(d, j);
            if (d == 0) a -= shift;
            // A(j+d, j) and its mirror A(j, j+d) in general band layout.
            lu(2 * kd + d, j) = a;
            if (d > 0) lu(2 * kd - d, j + d) = a;
        }
    }
    std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
    lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kd, kd, lu.data(), ldab, ipiv.data());
    if (info < 0) raise(ErrorCode::ConvergenceFailure, "dgbtrf argument error");
    if (info > 0) {
        // Exactly singular shift; nudge it once.
        return inverse_iteration(b, target - 1e-11 * scale, scale, previous);
    }

    // Deterministic start vector with weight on every component.
    RVector x(b.n);
    for (Index i = 0; i < b.n; ++i) x(i) = 1.0 + 0.5 * std::sin(0.37 * static_cast<double>(i) + 0.1);
    x.normalize();
    for (int it = 0; it < 30; ++it) {
        for (const RVector& v : previous) x -= v.dot(x) * v;
        x.normalize();
        RVector y = x;
        info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kd, kd, 1, lu.data(), ldab, ipiv.data(), y.data(), n);
        if (info != 0) raise(ErrorCode::ConvergenceFailure, "dgbtrs failed");
        for (const RVector& v : previous) y -= v.dot(y) * v;
        const double ny = y.norm();
        if (!(ny > 0.0) || !std::isfinite(ny)) raise(ErrorCode::ConvergenceFailure, "inverse iteration broke down");
        y /= ny;
        const double change = std::min((y - x).norm(), (y + x).norm());
        x = y;
        if (it >= 2 && change < 1e-14) break;
    }
    return x;
}

/// Number of eigenvalues below sigma, from the signs of the pivots of an unpivoted
/// LDL^T of (A - sigma). Tiny pivots are pushed to -pivmin as in tridiagonal Sturm counts.
Index count_below(const BandedSymmetric& b, double sigma, double pivmin) {
    const Index n = b.n;
    const Index kd = b.kd;
    // l(d, j) holds L(j + d, j); column j of L is only needed for the next kd columns.
    RMatrix l = RMatrix::Zero(kd + 1, n);
    RVector dpiv(n);
    Index negatives = 0;
    for (Index j = 0; j < n; ++j) {
        double djj = b.lower(0, j) - sigma;
        const Index k0 = std::max<Index>(0, j - kd);
        for (Index k = k0; k < j; ++k) {
            const double ljk = l(j - k, k);
            djj -= ljk * ljk * dpiv(k);
        }
        if (std::abs(djj) < pivmin) djj = -pivmin;
        dpiv(j) = djj;
        if (djj < 0.0) ++negatives;
        const Index top = std::min<Index>(kd, n - 1 - j);
        for (Index d = 1; d <= top; ++d) {
            const Index i = j + d;
            double v = b.lower(d, j);
            for (Index k = std::max<Index>(k0, i - kd); k < j; ++k) v -= l(i - k, k) * l(j - k, k) * dpiv(k);
            l(d, j) = v / djj;
        }
    }
    return negatives;
}

} // namespace

EigenSet lowest_banded(const BandedSymmetric& b, int count) {
    if (b.n <= 0) raise(ErrorCode::DimMismatch, "empty band matrix");
    count = std::clamp<int>(count, 1, static_cast<int>(b.n));

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    {
        RVector radius = RVector::Zero(b.n);
        for (Index j = 0; j < b.n; ++j) {
            const Index top = std::min<Index>(b.kd, b.n - 1 - j);
            for (Index k = 1; k <= top; ++k) {
                radius(j) += std::abs(b.lower(k, j));
                radius(j + k) += std::abs(b.lower(k, j));
            }
        }
        for (Index j = 0; j < b.n; ++j) {
            lo = std::min(lo, b.lower(0, j) - radius(j));
            hi = std::max(hi, b.lower(0, j) + radius(j));
        }
    }
    const double scale = std::max(std::abs(lo), std::abs(hi));
    const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, scale * scale);

    EigenSet out;
    double floor = lo;
    for (int k = 0; k < count; ++k) {
        double a = floor - 1e-12 * (1.0 + scale), c = hi + 1e-12 * (1.0 + scale);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + c);
            if (mid <= a || mid >= c) break;
            if (c - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(c)) + pivmin) break;
            if (count_below(b, mid, pivmin) > static_cast<Index>(k)) c = mid; else a = mid;
        }
        const double value = 0.5 * (a + c);
        out.values.push_back(value);
        floor = a;
    }
    // Gershgorin bound stands in for the spectral norm.
    out.norm = scale;

    std::vector<RVector> found_vectors;
    for (int k = 0; k < count; ++k) {
        RVector x = inverse_iteration(b, out.values[static_cast<std::size_t>(k)], scale, found_vectors);
        const RVector r = band_matvec(b, x) - out.values[static_cast<std::size_t>(k)] * x;
        out.residuals.push_back(r.norm());
        CVector v(b.n);
        for (Index i = 0; i < b.n; ++i) v(b.order[static_cast<std::size_t>(i)]) = x(i);
        StateVector sv(std::move(v));
        sv.canonicalize_phase();
        out.vectors.push_back(std::move(sv));
        found_vectors.push_back(std::move(x));
    }
    return out;
}

EigenSet sector_lowest(const ModelParams& p, const Truncation& t, const SectorBasis& s, int count, double stagger_bias) {
    if (s.size() > kDenseSectorLimit) {
        return lowest_banded(build_sector_banded(p, t, s, stagger_bias), count);
    }
    EigenSet all = eigh(build_sector_block(p, t, s, stagger_bias));
    const auto keep = static_cast<std::size_t>(std::clamp<Index>(count, 1, s.size()));
    all.values.resize(keep);
    all.vectors.resize(keep);
    all.residuals.resize(keep);
    return all;
}

double ground_energy(const ModelParams& p, const Truncation& t) {
    double best = std::numeric_limits<double>::infinity();
    for (const SectorBasis& s : finest_partition(p, t)) best = std::min(best, sector_lowest(p, t, s, 1).values[0]);
    return best;
}

ConvergedGround converge_ground(const ModelParams& p, std::span<const int> n_seq, double tol) {
    if (n_seq.size() < 2) raise(ErrorCode::InvalidParam, "converge_ground needs at least two truncations");
    for (std::size_t i = 1; i < n_seq.size(); ++i) {
        if (n_seq[i] <= n_seq[i - 1]) raise(ErrorCode::InvalidParam, "n_seq must be strictly increasing");
    }
    double prev = ground_energy(p, Truncation(n_seq[0]));
    double delta = 0.0;
    for (std::size_t i = 1; i < n_seq.size(); ++i) {
        const double next = ground_energy(p, Truncation(n_seq[i]));
        delta = std::abs(prev - next);
        if (delta <= tol) return {n_seq[i - 1], prev};
        prev = next;
    }
    raise(ErrorCode::NotConverged, "ground energy not converged; last delta " + std::to_string(delta));
}

} // namespace qrabi
