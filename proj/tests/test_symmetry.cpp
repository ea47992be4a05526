#include "qrabi/error.hpp"
#include "qrabi/model.hpp"
#include "qrabi/spectra.hpp"
#include "qrabi/symmetry.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace qrabi;

namespace {

ModelParams random_params(std::mt19937_64& rng, bool isotropic) {
    std::uniform_real_distribution<double> u(-2.0, 2.0), w(0.5, 2.0);
    ModelParams p;
    p.omega1 = u(rng);
    p.omega2 = u(rng);
    p.gamma_x = u(rng);
    p.gamma_y = isotropic ? p.gamma_x : u(rng);
    p.gamma_z = u(rng);
    p.omega_mode = w(rng);
    p.lambda1 = u(rng) / 2;
    p.lambda2 = u(rng) / 2;
    return p;
}

std::vector<double> merged_sector_spectrum(const ModelParams& p, const Truncation& t,
                                           const std::vector<SectorBasis>& sectors) {
    const auto h = build_full(p, t);
    std::vector<double> all;
    for (const auto& s : sectors) {
        const auto v = eigh(project(h, s)).values;
        all.insert(all.end(), v.begin(), v.end());
    }
    std::sort(all.begin(), all.end());
    return all;
}

} // namespace

TEST_CASE("sector labels parse and print") {
    CHECK(SectorLabel::parse("full") == SectorLabel::full());
    CHECK(SectorLabel::parse("K=-1") == SectorLabel::k(-1));
    CHECK(SectorLabel::parse("K=+1") == SectorLabel::k(1));
    CHECK(SectorLabel::parse("K=1") == SectorLabel::k(1));
    CHECK(SectorLabel::parse("m=-2") == SectorLabel::m(-2));
    CHECK(SectorLabel::parse("m=+2") == SectorLabel::m(2));
    CHECK(SectorLabel::m(-1).to_string() == "m=-1");
    for (const char* bad : {"", "K=0", "m=3", "x=1", "m=", "K=-1x"}) {
        CHECK_THROWS_AS(SectorLabel::parse(bad), Error);
    }
    try {
        SectorLabel::parse("m=7");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownLabel);
    }
}

TEST_CASE("sector sizes") {
    const Truncation t(5);
    const Index b = 6;
    CHECK(sector_basis(SectorLabel::k(-1), t).size() == 4 * b);
    CHECK(sector_basis(SectorLabel::k(1), t).size() == 5 * b);
    const int pairs[] = {1, 2, 3, 2, 1};
    for (int m = -2; m <= 2; ++m) CHECK(sector_basis(SectorLabel::m(m), t).size() == pairs[m + 2] * b);
    CHECK(sector_basis(SectorLabel::full(), t).size() == 9 * b);
}

TEST_CASE("sectors partition the product basis") {
    const Truncation t(3);
    for (const auto& parts : {m_sectors(t), k_sectors(t)}) {
        std::set<Index> seen;
        for (const auto& s : parts)
            for (Index i : s.indices) CHECK(seen.insert(i).second);
        CHECK(seen.size() == 36u);
    }
}

TEST_CASE("K sector membership follows the parity of m") {
    const auto k = SectorLabel::k(-1);
    CHECK(k.contains(1));
    CHECK(k.contains(-1));
    CHECK_FALSE(k.contains(0));
    CHECK_FALSE(k.contains(2));
    CHECK(SectorLabel::k(1).contains(-2));
}

TEST_CASE("K commutes with H for random parameters") {
    std::mt19937_64 rng(5);
    const Truncation t(8);
    const auto k = k_operator(t);
    const auto sz = sigma_tot_z(t);
    for (int i = 0; i < 20; ++i) {
        const auto h = build_full(random_params(rng, false), t);
        CHECK(commutator_norm(h, k) < 1e-14);
        const auto hi = build_full(random_params(rng, true), t);
        CHECK(commutator_norm(hi, sz) < 1e-14);
    }
}

TEST_CASE("Sigma_tot^z is broken by XY anisotropy") {
    auto p = preset_level_crossing(0.3, 1.0, 0.5, 1.0);
    p.gamma_y = 0.4;
    const Truncation t(8);
    CHECK(commutator_norm(build_full(p, t), sigma_tot_z(t)) > 1e-3);
    CHECK_THROWS_AS(sector_basis(SectorLabel::m(0), t, p), Error);
    CHECK_NOTHROW(sector_basis(SectorLabel::k(1), t, p));
    CHECK(finest_partition(p, t).size() == 2u);
    p.gamma_y = p.gamma_x;
    CHECK(finest_partition(p, t).size() == 5u);
}

TEST_CASE("sector spectra reassemble the full spectrum") {
    std::mt19937_64 rng(6);
    const Truncation t(6);
    for (int i = 0; i < 5; ++i) {
        const auto p = random_params(rng, false);
        const auto full = eigh(build_full(p, t)).values;
        const auto merged = merged_sector_spectrum(p, t, k_sectors(t));
        REQUIRE(full.size() == merged.size());
        for (std::size_t j = 0; j < full.size(); ++j) CHECK(full[j] == doctest::Approx(merged[j]).epsilon(1e-11));

        const auto q = random_params(rng, true);
        const auto fq = eigh(build_full(q, t)).values;
        const auto mq = merged_sector_spectrum(q, t, m_sectors(t));
        for (std::size_t j = 0; j < fq.size(); ++j) CHECK(fq[j] == doctest::Approx(mq[j]).epsilon(1e-11));
    }
}

TEST_CASE("off-sector couplings vanish") {
    std::mt19937_64 rng(7);
    const Truncation t(5);
    const auto h = build_full(random_params(rng, false), t);
    const auto a = sector_basis(SectorLabel::k(-1), t);
    const auto b = sector_basis(SectorLabel::k(1), t);
    double worst = 0.0;
    for (Index i : a.indices)
        for (Index j : b.indices) worst = std::max(worst, std::abs(h(i, j)));
    CHECK(worst == 0.0);
}

TEST_CASE("direct sector blocks match projections of the full matrix") {
    std::mt19937_64 rng(8);
    const Truncation t(7);
    const auto p = random_params(rng, true);
    const auto h = build_full(p, t);
    for (const auto& s : m_sectors(t)) {
        const auto direct = build_sector_block(p, t, s);
        CHECK((direct.mat() - project(h, s).mat()).cwiseAbs().maxCoeff() < 1e-14);
        const auto band = build_sector_banded(p, t, s);
        double worst = 0.0;
        for (Index i = 0; i < band.n; ++i)
            for (Index j = 0; j < band.n; ++j) {
                const Complex ref = direct(band.order[i], band.order[j]);
                worst = std::max(worst, std::abs(ref - band.at(i, j)));
            }
        CHECK(worst < 1e-14);
    }
}

TEST_CASE("embed and restrict are inverse on the sector") {
    const Truncation t(4);
    const auto s = sector_basis(SectorLabel::m(1), t);
    CVector v = CVector::Random(s.size());
    const CVector full = embed(v, s);
    CHECK(full.size() == 45);
    CHECK((restrict_to(full, s) - v).norm() == 0.0);
    CHECK(full.norm() == doctest::Approx(v.norm()));
}

TEST_CASE("commutator_norm edge cases") {
    const auto z = QMatrix::zero(3);
    const auto one = QMatrix::identity(3);
    CHECK(commutator_norm(z, one) == 0.0);
    const auto s = spin1_ops();
    CHECK(commutator_norm(s.x, s.y) > 0.1);
}
