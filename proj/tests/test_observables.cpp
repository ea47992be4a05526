#include "qrabi/error.hpp"
#include "qrabi/observables.hpp"
#include "qrabi/symmetry.hpp"

#include <doctest.h>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <random>
#include <tuple>

using namespace qrabi;

namespace {

// |m1 m2> (x) |0> superpositions on the product basis
CVector pair_state(const std::vector<std::tuple<int, int, Complex>>& terms, const Truncation& t) {
    CVector v = CVector::Zero(9 * t.boson_dim());
    for (const auto& [m1, m2, c] : terms) v(product_index(m1, m2, 0, t)) += c;
    return v;
}

CMatrix rho_of(const CVector& pair) { return pair * pair.adjoint(); }

} // namespace

TEST_CASE("negativity of reference states") {
    const Truncation t(2);
    const auto full = sector_basis(SectorLabel::full(), t);
    const double r2 = 1.0 / std::sqrt(2.0), r3 = 1.0 / std::sqrt(3.0);

    const auto product = StateVector::normalized(pair_state({{1, 0, 1.0}}, t));
    CHECK(negativity(reduce_to_qutrits(product, full)) == doctest::Approx(0.0).epsilon(1e-14));

    const auto bell = StateVector::normalized(pair_state({{1, 0, r2}, {0, 1, r2}}, t));
    CHECK(negativity(reduce_to_qutrits(bell, full)) == doctest::Approx(0.5));

    // maximally entangled two-qutrit state: (d - 1)/2
    const auto max_ent = StateVector::normalized(pair_state({{1, -1, r3}, {0, 0, r3}, {-1, 1, r3}}, t));
    CHECK(negativity(reduce_to_qutrits(max_ent, full)) == doctest::Approx(1.0));
    CHECK(negativity(reduce_to_qutrits(max_ent, full), TransposedQutrit::First) == doctest::Approx(1.0));
}

TEST_CASE("negativity of a Schmidt state is (sum sqrt(p))^2 - 1 over 2") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Truncation t(1);
    const auto full = sector_basis(SectorLabel::full(), t);
    for (int i = 0; i < 20; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng);
        const auto s = StateVector::normalized(pair_state({{1, 1, a}, {0, 0, b}, {-1, -1, c}}, t));
        const double n = a * a + b * b + c * c;
        const double sum = (a + b + c) / std::sqrt(n);
        CHECK(negativity(reduce_to_qutrits(s, full)) == doctest::Approx((sum * sum - 1.0) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("local unitaries leave negativity unchanged") {
    std::mt19937_64 rng(15);
    std::normal_distribution<double> d;
    CVector psi(9);
    for (Index i = 0; i < 9; ++i) psi(i) = Complex(d(rng), d(rng));
    psi.normalize();
    CMatrix g(3, 3);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j) g(i, j) = Complex(d(rng), d(rng));
    const CMatrix u = unitary_exp(Complex(0, 1) * (g + g.adjoint()) / 2.0).mat();
    const CVector rotated = Eigen::kroneckerProduct(u, CMatrix::Identity(3, 3)).eval() * psi;
    CHECK(negativity(rho_of(rotated)) == doctest::Approx(negativity(rho_of(psi))).epsilon(1e-12));
}

TEST_CASE("negativity rejects unnormalized input") {
    CMatrix rho = CMatrix::Identity(9, 9) / 8.0;
    CHECK_THROWS_AS(negativity(rho), Error);
    try {
        negativity(rho);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidState);
    }
    CHECK(negativity(CMatrix::Identity(9, 9) / 9.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("reduced density matrix traces out the mode") {
    const Truncation t(3);
    const auto full = sector_basis(SectorLabel::full(), t);
    CVector v = CVector::Zero(36);
    v(product_index(1, 0, 0, t)) = 0.6;
    v(product_index(0, 1, 2, t)) = 0.8;
    const CMatrix rho = reduce_to_qutrits(StateVector(v), full);
    CHECK(rho.trace().real() == doctest::Approx(1.0));
    // orthogonal Fock states kill the coherence
    CHECK(std::abs(rho(0 * 3 + 1, 1 * 3 + 0)) < 1e-15);
    CHECK(rho(1, 1).real() == doctest::Approx(0.36));
    CHECK(negativity(rho) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("magnetizations of basis states") {
    const Truncation t(2);
    const auto full = sector_basis(SectorLabel::full(), t);
    const auto s = StateVector::normalized(pair_state({{1, 0, 1.0}}, t));
    const auto m = magnetizations(s, full);
    CHECK(m.m_total == doctest::Approx(1.0));
    CHECK(m.m_half == doctest::Approx(0.5));
    CHECK(m.m_stag == doctest::Approx(0.5));
    const auto mix = StateVector::normalized(pair_state({{1, -1, 1.0}, {-1, 1, 1.0}}, t));
    CHECK(magnetizations(mix, full).m_total == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(magnetizations(mix, full).m_stag == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("sector-basis and product-basis observables agree") {
    const Truncation t(6);
    const auto s = sector_basis(SectorLabel::m(-1), t);
    std::mt19937_64 rng(16);
    std::normal_distribution<double> d;
    CVector v(s.size());
    for (Index i = 0; i < s.size(); ++i) v(i) = Complex(d(rng), d(rng));
    const auto sv = StateVector::normalized(v);
    const auto fv = StateVector::normalized(embed(sv.amps(), s));
    const auto full = sector_basis(SectorLabel::full(), t);
    CHECK(mean_photon(sv, s) == doctest::Approx(mean_photon(fv, full)));
    CHECK(magnetizations(sv, s).m_stag == doctest::Approx(magnetizations(fv, full).m_stag));
    CHECK(negativity(reduce_to_qutrits(sv, s)) == doctest::Approx(negativity(reduce_to_qutrits(fv, full))));
}

TEST_CASE("photon number and quadratures of a coherent state") {
    const Truncation t(40);
    const auto full = sector_basis(SectorLabel::full(), t);
    const double alpha = 1.2;
    const CVector boson = displacement(alpha, t).mat().col(0);
    CVector v = CVector::Zero(9 * 41);
    v.segment(product_index(0, 0, 0, t), 41) = boson;
    const StateVector s(v);
    CHECK(mean_photon(s, full) == doctest::Approx(alpha * alpha).epsilon(1e-9));
    const auto q = quad_variances(s, full);
    CHECK(q.var_x == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(q.var_p == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("make_record fills every field") {
    const Truncation t(4);
    const auto full = sector_basis(SectorLabel::full(), t);
    const auto s = StateVector::normalized(pair_state({{0, -1, 1.0}}, t));
    const auto r = make_record(-1.5, 0.25, s, full, 0.01);
    CHECK(r.energy == -1.5);
    CHECK(r.gap == 0.25);
    CHECK(r.m_total == doctest::Approx(-1.0));
    CHECK(r.m_stag == doctest::Approx(0.5));
    CHECK(r.mean_photon == doctest::Approx(0.0));
    CHECK(r.n_rescaled == doctest::Approx(0.0));
    CHECK(r.quad_var_x == doctest::Approx(0.5));
    CHECK(r.sector == "full");
}
