#include "qrabi/ops.hpp"

#include "qrabi/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace qrabi {

Truncation::Truncation(int n_max_, double residual_tol_) : n_max(n_max_), residual_tol(residual_tol_) {
    if (n_max < 1) {
        raise(ErrorCode::InvalidParam, "n_max must be >= 1, got " + std::to_string(n_max));
    }
    if (!(residual_tol > 0.0)) {
        raise(ErrorCode::InvalidParam, "residual_tol must be positive");
    }
}

// ---------------------------------------------------------------------------
// QMatrix

QMatrix::QMatrix(CMatrix entries, bool hermitian_hint) : m_(std::move(entries)), hermitian_(hermitian_hint) {
    if (m_.rows() != m_.cols()) {
        raise(ErrorCode::DimMismatch, "QMatrix must be square");
    }
    if (hermitian_) {
        const double scale = max_abs();
        const double defect = hermitian_defect();
        if (defect > 1e-12 * scale) {
            raise(ErrorCode::NotHermitian, "hermitian_hint set but max|A - A^dagger| = " + std::to_string(defect));
        }
    }
}

QMatrix QMatrix::identity(Index dim) { return QMatrix(CMatrix::Identity(dim, dim), true); }

QMatrix QMatrix::zero(Index dim, bool hermitian_hint) { return QMatrix(CMatrix::Zero(dim, dim), hermitian_hint); }

QMatrix QMatrix::adjoint() const { return QMatrix(m_.adjoint(), hermitian_); }

double QMatrix::max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

double QMatrix::hermitian_defect() const {
    if (m_.size() == 0) return 0.0;
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

QMatrix& QMatrix::operator+=(const QMatrix& other) {
    if (dim() != other.dim()) raise(ErrorCode::DimMismatch, "QMatrix sum of different dimensions");
    m_ += other.m_;
    hermitian_ = hermitian_ && other.hermitian_;
    return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& other) {
    if (dim() != other.dim()) raise(ErrorCode::DimMismatch, "QMatrix difference of different dimensions");
    m_ -= other.m_;
    hermitian_ = hermitian_ && other.hermitian_;
    return *this;
}

QMatrix operator*(double s, const QMatrix& a) {
    QMatrix out;
    out.m_ = s * a.m_;
    out.hermitian_ = a.hermitian_;
    return out;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.dim() != b.dim()) raise(ErrorCode::DimMismatch, "QMatrix product of different dimensions");
    return QMatrix(a.m_ * b.m_, false);
}

// ---------------------------------------------------------------------------
// StateVector

StateVector StateVector::normalized(CVector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        raise(ErrorCode::InvalidState, "cannot normalize a zero or non-finite vector");
    }
    StateVector out(amplitudes / n);
    out.canonicalize_phase();
    return out;
}

void StateVector::canonicalize_phase() {
    if (v_.size() == 0) return;
    // A relative tie window keeps the choice stable against round-off between
    // amplitudes of equal nominal magnitude.
    const double top = v_.cwiseAbs().maxCoeff();
    if (top == 0.0) return;
    Index pivot = 0;
    for (Index i = 0; i < v_.size(); ++i) {
        if (std::abs(v_(i)) >= top * (1.0 - 1e-9)) {
            pivot = i;
            break;
        }
    }
    const Complex phase = std::conj(v_(pivot)) / std::abs(v_(pivot));
    v_ *= phase;
    v_(pivot) = Complex(std::abs(v_(pivot)), 0.0);
}

// ---------------------------------------------------------------------------
// Elementary operators

OperatorTriple spin1_ops() {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    CMatrix x = CMatrix::Zero(3, 3), y = CMatrix::Zero(3, 3), z = CMatrix::Zero(3, 3);
    x(0, 1) = x(1, 0) = x(1, 2) = x(2, 1) = s;
    // S+ has entries sqrt(2) above the diagonal; Sy = (S+ - S-)/(2i).
    y(0, 1) = -i * s;
    y(1, 0) = i * s;
    y(1, 2) = -i * s;
    y(2, 1) = i * s;
    z(0, 0) = 1.0;
    z(2, 2) = -1.0;
    return {QMatrix(x, true), QMatrix(y, true), QMatrix(z, true)};
}

OperatorTriple pauli_ops() {
    const Complex i(0.0, 1.0);
    CMatrix x(2, 2), y(2, 2), z(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    y << 0.0, -i, i, 0.0;
    z << 1.0, 0.0, 0.0, -1.0;
    return {QMatrix(x, true), QMatrix(y, true), QMatrix(z, true)};
}

QMatrix annihilation(const Truncation& t) {
    const Index d = t.boson_dim();
    CMatrix a = CMatrix::Zero(d, d);
    for (Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return QMatrix(std::move(a), false);
}

QMatrix creation(const Truncation& t) { return annihilation(t).adjoint(); }

QMatrix number_op(const Truncation& t) {
    const Index d = t.boson_dim();
    CMatrix n = CMatrix::Zero(d, d);
    for (Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
    return QMatrix(std::move(n), true);
}

QMatrix field_op(const Truncation& t) {
    const CMatrix a = annihilation(t).mat();
    return QMatrix(a + a.adjoint(), true);
}

QMatrix unitary_exp(const CMatrix& g) {
    if (g.rows() != g.cols()) raise(ErrorCode::DimMismatch, "generator must be square");
    const CMatrix h = Complex(0.0, 1.0) * g; // Hermitian
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (es.info() != Eigen::Success) raise(ErrorCode::ConvergenceFailure, "eigendecomposition of generator failed");
    const CVector phases = (Complex(0.0, -1.0) * es.eigenvalues().cast<Complex>()).array().exp();
    CMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    if (g.imag().cwiseAbs().maxCoeff() == 0.0) {
        // exp of a real generator is real; drop the round-off imaginary part.
        u = u.real().cast<Complex>();
    }
    return QMatrix(std::move(u), false);
}

QMatrix displacement(double alpha, const Truncation& t) {
    if (!std::isfinite(alpha)) raise(ErrorCode::InvalidParam, "displacement amplitude must be finite");
    if (9.0 * alpha * alpha > t.n_max) {
        raise(ErrorCode::TruncationTooSmall, "displacement needs n_max >= 9 alpha^2 (alpha = " + std::to_string(alpha) +
                                                 ", n_max = " + std::to_string(t.n_max) + ")");
    }
    const CMatrix a = annihilation(t).mat();
    return unitary_exp(alpha * (a.adjoint() - a));
}

QMatrix squeeze(double r, const Truncation& t) {
    if (!std::isfinite(r)) raise(ErrorCode::InvalidParam, "squeeze parameter must be finite");
    if (4.0 * std::exp(2.0 * std::abs(r)) > t.n_max) {
        raise(ErrorCode::TruncationTooSmall, "squeeze needs n_max >= 4 e^{2|r|} (r = " + std::to_string(r) +
                                                 ", n_max = " + std::to_string(t.n_max) + ")");
    }
    const CMatrix a = annihilation(t).mat();
    const CMatrix ad = a.adjoint();
    return unitary_exp(0.5 * r * (ad * ad - a * a));
}

QMatrix kron(const QMatrix& a, const QMatrix& b) {
    const Index da = a.dim(), db = b.dim();
    QMatrix out;
    out.m_ = CMatrix::Zero(da * db, da * db);
    for (Index i = 0; i < da; ++i) {
        for (Index j = 0; j < da; ++j) {
            if (a(i, j) != 0.0) out.m_.block(i * db, j * db, db, db) = a(i, j) * b.m_;
        }
    }
    // A Kronecker product of Hermitian factors is exactly Hermitian; no re-check needed.
    out.hermitian_ = a.hermitian_ && b.hermitian_;
    return out;
}

QMatrix kron3(const QMatrix& a, const QMatrix& b, const QMatrix& c) { return kron(kron(a, b), c); }

QMatrix commutator(const QMatrix& a, const QMatrix& b) {
    if (a.dim() != b.dim()) raise(ErrorCode::DimMismatch, "commutator of different dimensions");
    return QMatrix(a.mat() * b.mat() - b.mat() * a.mat(), false);
}

} // namespace qrabi
