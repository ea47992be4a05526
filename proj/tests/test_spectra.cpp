#include "qrabi/error.hpp"
#include "qrabi/model.hpp"
#include "qrabi/spectra.hpp"
#include "qrabi/symmetry.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

using namespace qrabi;

namespace {

BandedSymmetric random_band(Index n, int kd, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    BandedSymmetric b;
    b.n = n;
    b.kd = kd;
    b.lower = RMatrix::Zero(kd + 1, n);
    for (Index j = 0; j < n; ++j)
        for (int r = 0; r <= kd && j + r < n; ++r) b.lower(r, j) = d(rng);
    b.order.resize(n);
    for (Index i = 0; i < n; ++i) b.order[i] = i;
    return b;
}

RMatrix dense_of(const BandedSymmetric& b) {
    RMatrix m(b.n, b.n);
    for (Index i = 0; i < b.n; ++i)
        for (Index j = 0; j < b.n; ++j) m(i, j) = b.at(i, j);
    return m;
}

} // namespace

TEST_CASE("eigh on a known 2x2") {
    CMatrix m(2, 2);
    m << 1.0, Complex(0, 1), Complex(0, -1), 1.0;
    const auto es = eigh(QMatrix(m, true));
    CHECK(es.values[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(es.values[1] == doctest::Approx(2.0));
    CHECK(es.norm == doctest::Approx(2.0));
    for (double r : es.residuals) CHECK(r < 1e-14);
    // canonical phase: the largest amplitude is real and positive
    CHECK(es.vectors[0][0].real() > 0.0);
}

TEST_CASE("eigh refuses matrices without the Hermitian hint") {
    CMatrix m = CMatrix::Identity(2, 2);
    CHECK_THROWS_AS(eigh(QMatrix(m, false)), Error);
}

TEST_CASE("harmonic oscillator ladder") {
    const Truncation t(30);
    const auto es = eigh(number_op(t));
    for (int n = 0; n <= 30; ++n) CHECK(es.values[n] == doctest::Approx(double(n)));
}

TEST_CASE("a qutrit with no XY coupling shifts the mode by -lambda^2/omega") {
    // Sz eigenstates decouple; m1 = +-1 displace the mode
    ModelParams p;
    p.omega1 = 0.0;
    p.omega2 = 0.0;
    p.omega_mode = 2.0;
    p.lambda1 = 0.5;
    const Truncation t(40);
    const auto g = ground(build_full(p, t));
    CHECK(g.energy == doctest::Approx(-0.125).epsilon(1e-10));
    // m1 = +1 and -1 are degenerate, so the gap is reported as zero
    CHECK(g.gap == 0.0);
}

TEST_CASE("band bisection matches dense eigenvalues") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 6; ++trial) {
        const Index n = 40 + 23 * trial;
        const int kd = 1 + trial % 4;
        const auto b = random_band(n, kd, rng);
        Eigen::SelfAdjointEigenSolver<RMatrix> ref(dense_of(b));
        const auto es = lowest_banded(b, 6);
        REQUIRE(es.values.size() == 6u);
        for (int k = 0; k < 6; ++k) {
            CHECK(es.values[k] == doctest::Approx(ref.eigenvalues()(k)).epsilon(1e-12));
            CHECK(es.residuals[k] < 1e-10 * es.norm);
        }
    }
}

TEST_CASE("band vectors are reported in the caller's ordering") {
    std::mt19937_64 rng(10);
    auto b = random_band(30, 2, rng);
    for (Index i = 0; i < 30; ++i) b.order[i] = 29 - i;
    const RMatrix a = dense_of(b);
    RMatrix permuted(30, 30);
    for (Index i = 0; i < 30; ++i)
        for (Index j = 0; j < 30; ++j) permuted(b.order[i], b.order[j]) = a(i, j);
    const auto es = lowest_banded(b, 3);
    for (int k = 0; k < 3; ++k) {
        const RVector v = es.vectors[k].amps().real();
        CHECK((permuted * v - es.values[k] * v).norm() < 1e-10);
    }
}

TEST_CASE("band path agrees with dense sector solves on a large block") {
    const auto p = preset_qpt(1.0, 1.0, 0.15, 0.05);
    const Truncation t(260);
    const auto s = sector_basis(SectorLabel::m(-1), t, p);
    REQUIRE(s.size() > kDenseSectorLimit);
    const auto band = sector_lowest(p, t, s, 3);
    const auto dense = eigh(build_sector_block(p, t, s));
    for (int k = 0; k < 3; ++k) CHECK(band.values[k] == doctest::Approx(dense.values[k]).epsilon(1e-11));
    const double overlap = std::abs(band.vectors[0].amps().dot(dense.vectors[0].amps()));
    CHECK(overlap == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("ground_energy is the minimum over sectors") {
    const auto p = preset_level_crossing(0.2, 1.0, 0.4, 1.0);
    const Truncation t(20);
    CHECK(ground_energy(p, t) == doctest::Approx(eigh(build_full(p, t)).values[0]).epsilon(1e-12));
}

TEST_CASE("converge_ground stops at the first stable truncation") {
    const auto p = preset_level_crossing(0.5, 1.0, 0.5, 1.0);
    const std::array<int, 5> ns = {4, 8, 16, 32, 64};
    const auto c = converge_ground(p, ns, 1e-9);
    CHECK(c.n_star >= 8);
    CHECK(c.n_star <= 32);
    CHECK(c.energy == doctest::Approx(ground_energy(p, Truncation(64))).epsilon(1e-9));
    const std::array<int, 2> short_seq = {2, 3};
    CHECK_THROWS_AS(converge_ground(preset_level_crossing(0.5, 1.0, 2.0, 1.0), short_seq, 1e-12), Error);
    const std::array<int, 2> bad = {8, 4};
    CHECK_THROWS_AS(converge_ground(p, bad, 1e-9), Error);
}
