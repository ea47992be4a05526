#include "qrabi/error.hpp"
#include "qrabi/ops.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qrabi;

namespace {

const Complex I(0.0, 1.0);

double max_dev(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

CMatrix random_hermitian(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    CMatrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(i, j) = Complex(d(rng), d(rng));
    return (m + m.adjoint()) / 2.0;
}

} // namespace

TEST_CASE("spin-1 matrices satisfy the angular-momentum algebra") {
    const auto s = spin1_ops();
    CHECK(max_dev(commutator(s.x, s.y).mat(), I * s.z.mat()) < 1e-14);
    CHECK(max_dev(commutator(s.y, s.z).mat(), I * s.x.mat()) < 1e-14);
    CHECK(max_dev(commutator(s.z, s.x).mat(), I * s.y.mat()) < 1e-14);
    const CMatrix s2 = (s.x * s.x + s.y * s.y + s.z * s.z).mat();
    CHECK(max_dev(s2, 2.0 * CMatrix::Identity(3, 3)) < 1e-14);
    CHECK(s.z(0, 0).real() == 1.0);
    CHECK(s.z(1, 1).real() == 0.0);
    CHECK(s.z(2, 2).real() == -1.0);
    CHECK(s.x.hermitian_hint());
}

TEST_CASE("Pauli matrices square to one and anticommute") {
    const auto p = pauli_ops();
    const CMatrix one = CMatrix::Identity(2, 2);
    CHECK(max_dev((p.x * p.x).mat(), one) < 1e-15);
    CHECK(max_dev((p.y * p.y).mat(), one) < 1e-15);
    CHECK(max_dev((p.z * p.z).mat(), one) < 1e-15);
    CHECK(max_dev((p.x * p.y + p.y * p.x).mat(), CMatrix::Zero(2, 2)) < 1e-15);
    CHECK(max_dev((p.x * p.y).mat(), I * p.z.mat()) < 1e-15);
}

TEST_CASE("truncated boson operators") {
    const Truncation t(12);
    const auto a = annihilation(t);
    const auto ad = creation(t);
    CHECK(a.dim() == 13);
    CHECK(max_dev(ad.mat(), a.mat().adjoint()) == 0.0);
    const CMatrix c = commutator(a, ad).mat();
    for (Index i = 0; i < 12; ++i) CHECK(std::abs(c(i, i) - 1.0) < 1e-14);
    // the cut-off leaves -n_max in the corner
    CHECK(std::abs(c(12, 12) + 12.0) < 1e-12);
    const CMatrix n = number_op(t).mat();
    for (Index i = 0; i <= 12; ++i) CHECK(n(i, i).real() == doctest::Approx(double(i)));
    CHECK(max_dev(field_op(t).mat(), (a + ad).mat()) == 0.0);
}

TEST_CASE("Truncation rejects a cut-off below one") {
    CHECK_THROWS_AS(Truncation(0), Error);
    CHECK_NOTHROW(Truncation(1));
}

TEST_CASE("displaced vacuum has Poisson amplitudes") {
    const Truncation t(40);
    const double alpha = 1.5;
    const CMatrix d = displacement(alpha, t).mat();
    double fact = 1.0;
    for (int n = 0; n <= 15; ++n) {
        if (n > 0) fact *= n;
        const double expected = std::exp(-alpha * alpha / 2) * std::pow(alpha, n) / std::sqrt(fact);
        CHECK(std::abs(d(n, 0) - expected) < 1e-9);
    }
    CHECK(max_dev(d * d.adjoint(), CMatrix::Identity(41, 41)) < 1e-10);
    CHECK_THROWS_AS(displacement(2.2, t), Error);
}

TEST_CASE("displacement shifts the annihilation operator") {
    const Truncation t(60);
    const double alpha = -0.8;
    const CMatrix d = displacement(alpha, t).mat();
    const CMatrix a = annihilation(t).mat();
    const CVector vac = d.col(0);
    CHECK(std::abs(vac.dot(a * vac) - alpha) < 1e-10);
}

TEST_CASE("squeezed vacuum saturates the uncertainty bound") {
    const Truncation t(80);
    for (double r : {-0.4, 0.0, 0.3}) {
        const CMatrix a = annihilation(t).mat();
        const CMatrix x = (a + a.adjoint()) / std::sqrt(2.0);
        const CMatrix p = I * (a.adjoint() - a) / std::sqrt(2.0);
        const CVector v = squeeze(r, t).mat().col(0);
        const double vx = v.dot(x * x * v).real();
        const double vp = v.dot(p * p * v).real();
        CHECK(vx * vp == doctest::Approx(0.25).epsilon(1e-9));
        CHECK(vx == doctest::Approx(std::exp(2 * r) / 2).epsilon(1e-9));
    }
    CHECK_THROWS_AS(squeeze(1.0, Truncation(20)), Error);
}

TEST_CASE("unitary_exp of an anti-Hermitian generator is unitary") {
    std::mt19937_64 rng(7);
    const CMatrix h = random_hermitian(6, rng);
    const CMatrix u = unitary_exp(I * h).mat();
    CHECK(max_dev(u * u.adjoint(), CMatrix::Identity(6, 6)) < 1e-12);
    // exp(iH) commutes with H
    CHECK(max_dev(u * h, h * u) < 1e-12);
}

TEST_CASE("kron3 follows the product-index convention") {
    const Truncation t(3);
    const auto s = spin1_ops();
    const auto one3 = QMatrix::identity(3);
    const auto oneb = QMatrix::identity(t.boson_dim());
    const CMatrix s1z = kron3(s.z, one3, oneb).mat();
    const CMatrix s2z = kron3(one3, s.z, oneb).mat();
    const CMatrix nb = kron3(one3, one3, number_op(t)).mat();
    for (int m1 : {1, 0, -1})
        for (int m2 : {1, 0, -1})
            for (int n = 0; n <= 3; ++n) {
                const Index i = product_index(m1, m2, n, t);
                CHECK(s1z(i, i).real() == m1);
                CHECK(s2z(i, i).real() == m2);
                CHECK(nb(i, i).real() == n);
            }
    CHECK(qutrit_index(1) == 0);
    CHECK(qutrit_m(2) == -1);
}

TEST_CASE("kron is bilinear and multiplicative") {
    std::mt19937_64 rng(11);
    const QMatrix a(random_hermitian(3, rng), true), b(random_hermitian(4, rng), true);
    const QMatrix c(random_hermitian(3, rng), true), d(random_hermitian(4, rng), true);
    CHECK(max_dev((kron(a, b) * kron(c, d)).mat(), kron(a * c, b * d).mat()) < 1e-12);
    CHECK(max_dev(kron(a + c, b).mat(), (kron(a, b) + kron(c, b)).mat()) < 1e-12);
    CHECK(kron(a, b).hermitian_hint());
}

TEST_CASE("QMatrix enforces the Hermitian hint") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(QMatrix(m, true), Error);
    CHECK_NOTHROW(QMatrix(m, false));
    try {
        QMatrix(m, true);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotHermitian);
    }
    const QMatrix q(m);
    CHECK(q.hermitian_defect() == doctest::Approx(1.0));
    CHECK(q.max_abs() == 1.0);
}

TEST_CASE("StateVector canonical phase") {
    CVector v(3);
    v << Complex(0, 0.1), Complex(0, -2.0), Complex(0.5, 0);
    const auto s = StateVector::normalized(v);
    CHECK(s.norm() == doctest::Approx(1.0));
    CHECK(s[1].imag() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s[1].real() > 0.0);
    // ties go to the lowest index
    CVector w(2);
    w << Complex(0, 1), Complex(-1, 0);
    const auto t = StateVector::normalized(w);
    CHECK(t[0].real() > 0.0);
    CHECK(std::abs(t[0].imag()) < 1e-15);
}
