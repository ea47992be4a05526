#pragma once

// Finite-matrix building blocks: spin-1 and Pauli operators, truncated boson
// operators, displacement/squeeze unitaries and the qutrit-qutrit-boson
// Kronecker scaffolding.
//
// Global basis conventions:
//   qutrit   index 0,1,2  <->  m = +1, 0, -1
//   qubit    index 0,1    <->  |+>, |->
//   product  index (i1*3 + i2)*(n_max+1) + n

#include <Eigen/Dense>

#include <complex>

namespace qrabi {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr int kQutritDim = 3;
inline constexpr int kPairDim = 9;

/// Fock-space cut-off. The boson factor has dimension n_max + 1.
struct Truncation {
    int n_max = 1;
    double residual_tol = 1e-8;

    Truncation() = default;
    explicit Truncation(int n_max, double residual_tol = 1e-8);

    Index boson_dim() const { return n_max + 1; }
};

/// Dense complex square matrix with a flag recording whether it is known to be Hermitian.
class QMatrix {
public:
    QMatrix() = default;
    /// Throws NotHermitian when `hermitian_hint` is set but the entries are not
    /// Hermitian within 1e-12 relative to the largest entry.
    explicit QMatrix(CMatrix entries, bool hermitian_hint = false);

    static QMatrix identity(Index dim);
    static QMatrix zero(Index dim, bool hermitian_hint = true);

    Index dim() const { return m_.rows(); }
    const CMatrix& mat() const { return m_; }
    bool hermitian_hint() const { return hermitian_; }
    Complex operator()(Index i, Index j) const { return m_(i, j); }

    QMatrix adjoint() const;
    double max_abs() const;
    double frobenius_norm() const { return m_.norm(); }
    /// Largest deviation from Hermiticity, max|A - A^dagger|.
    double hermitian_defect() const;

    QMatrix& operator+=(const QMatrix& other);
    QMatrix& operator-=(const QMatrix& other);

    friend QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
    friend QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
    friend QMatrix operator*(double s, const QMatrix& a);
    friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
    friend QMatrix kron(const QMatrix& a, const QMatrix& b);

private:
    CMatrix m_;
    bool hermitian_ = false;
};

/// Complex amplitude vector over some basis.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(CVector amplitudes) : v_(std::move(amplitudes)) {}

    /// Normalizes and applies the canonical global phase (largest-magnitude
    /// amplitude real and non-negative, ties broken by the lowest index).
    static StateVector normalized(CVector amplitudes);

    Index dim() const { return v_.size(); }
    const CVector& amps() const { return v_; }
    Complex operator[](Index i) const { return v_(i); }
    double norm() const { return v_.norm(); }

    void canonicalize_phase();

private:
    CVector v_;
};

struct OperatorTriple {
    QMatrix x, y, z;
};

/// Spin-1 matrices in the (|1>, |0>, |-1>) ordering.
OperatorTriple spin1_ops();
/// Pauli matrices in the (|+>, |->) ordering.
OperatorTriple pauli_ops();

QMatrix annihilation(const Truncation& t);
QMatrix creation(const Truncation& t);
QMatrix number_op(const Truncation& t);
/// a + a^dagger
QMatrix field_op(const Truncation& t);

/// D(alpha) = exp(alpha (a^dagger - a)), exponentiated in the truncated space.
/// Requires alpha^2 <= n_max / 9.
QMatrix displacement(double alpha, const Truncation& t);

/// S(r) = exp((r/2)(a^dagger^2 - a^2)). Requires 4 e^{2|r|} <= n_max.
QMatrix squeeze(double r, const Truncation& t);

/// exp(G) for an anti-Hermitian G, via the eigendecomposition of iG.
QMatrix unitary_exp(const CMatrix& anti_hermitian);

QMatrix kron(const QMatrix& a, const QMatrix& b);
/// qutrit-1 (x) qutrit-2 (x) boson; index (i1*dimB + i2)*dimC + n.
QMatrix kron3(const QMatrix& a, const QMatrix& b, const QMatrix& c);

QMatrix commutator(const QMatrix& a, const QMatrix& b);

/// Qutrit slot for a spin projection m in {1, 0, -1}.
constexpr int qutrit_index(int m) { return 1 - m; }
constexpr int qutrit_m(int index) { return 1 - index; }

/// Product-basis index of |m1 m2> (x) |n>.
inline Index product_index(int m1, int m2, int n, const Truncation& t) {
    return (static_cast<Index>(qutrit_index(m1)) * 3 + qutrit_index(m2)) * t.boson_dim() + n;
}

} // namespace qrabi
