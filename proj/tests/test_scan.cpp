#include "qrabi/analytic.hpp"
#include "qrabi/error.hpp"
#include "qrabi/scan.hpp"

#include <doctest.h>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <stdexcept>

using namespace qrabi;

TEST_CASE("axis values hit both ends exactly") {
    const Axis a{"x", 0.001, 0.5, 61};
    const auto v = a.values();
    REQUIRE(v.size() == 61u);
    CHECK(v.front() == 0.001);
    CHECK(v.back() == 0.5);
    CHECK(a.step() == doctest::Approx(0.499 / 60));
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
}

TEST_CASE("grid validation") {
    GridSpec g = phase_diagram_grid({"Omega/gamma", -1, 1, 3}, {"x", 0.1, 0.2, 2}, 1.0, 8);
    CHECK_NOTHROW(g.validate());
    CHECK(g.size() == 6u);
    g.axis1.count = 1;
    CHECK_THROWS_AS(g.validate(), Error);
    g.axis1.count = 3;
    g.axis1.max = -2;
    CHECK_THROWS_AS(g.validate(), Error);
    g.axis1.max = 1;
    g.truncation.n_max = 0;
    CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("default phase-diagram grid") {
    const auto g = default_phase_diagram_grid();
    CHECK(g.axis1.count == 61);
    CHECK(g.axis2->count == 61);
    CHECK(g.axis1.min == -1.2);
    CHECK(g.axis2->max == 0.5);
    CHECK(g.truncation.n_max == 48);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
    for (int workers : {1, 3, 16}) {
        std::vector<std::atomic<int>> hits(257);
        parallel_for(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
        for (auto& h : hits) CHECK(h.load() == 1);
    }
    CHECK_THROWS_AS(parallel_for(50, 4,
                                 [](std::size_t i) {
                                     if (i == 17) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("phase-diagram points carry the analytic labels deep inside each phase") {
    CHECK(phase_diagram_point(1.0, 0.05, 1.0, 24).label == -2);
    CHECK(phase_diagram_point(-1.0, 0.05, 1.0, 24).label == 2);
    CHECK(phase_diagram_point(0.0, 0.05, 1.0, 24).label == 0);
    for (double w : {-0.3, 0.3})
        for (double x : {0.3, 0.45}) {
            const int expected = candidate(ground_family(w, x)).m_total;
            CHECK(phase_diagram_point(w, x, 1.0, 32).label == expected);
        }
    const auto p = phase_diagram_point(0.3, 0.2, 1.0, 24);
    CHECK(p.ok());
    CHECK(p.record.energy < 0.0);
}

TEST_CASE("phase-diagram scan is independent of the worker count") {
    const auto grid = phase_diagram_grid({"Omega/gamma", -1.2, 1.2, 7}, {"x", 0.001, 0.5, 5}, 1.0, 20);
    const auto a = scan_phase_diagram(grid, 1);
    const auto b = scan_phase_diagram(grid, 4);
    CHECK(phase_diagram_csv(a) == phase_diagram_csv(b));
    CHECK(sidecar_json(a) == sidecar_json(b));
    CHECK(a.points.size() == 35u);
    CHECK(a.failed() == 0u);
    // row-major: axis2 varies fastest
    CHECK(a.points[1].coord1 == a.points[0].coord1);
    CHECK(a.points[1].coord2 > a.points[0].coord2);
}

TEST_CASE("CSV layout") {
    const auto r = scan_phase_diagram(phase_diagram_grid({"Omega/gamma", -1, 1, 2}, {"x", 0.1, 0.2, 2}, 1.0, 8), 1);
    const std::string csv = phase_diagram_csv(r);
    CHECK(csv.rfind("omega_over_gamma,x,energy,m_total,m_half,m_stag,mean_photon,negativity,gap,sector,status\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("sidecar JSON is parseable and records the grid") {
    const auto r = scan_phase_diagram(phase_diagram_grid({"Omega/gamma", -1, 1, 2}, {"x", 0.1, 0.2, 2}, 1.0, 8), 2);
    const auto doc = nlohmann::json::parse(sidecar_json(r, {{"unit", "gamma"}}));
    CHECK(doc["grid"]["axis1"]["count"] == 2);
    CHECK(doc["grid"]["truncation"]["n_max"] == 8);
    CHECK(doc["provenance"]["version"] == version());
    CHECK(doc["failed"] == 0);
    CHECK(doc["unit"] == "gamma");
    CHECK_FALSE(doc["provenance"].contains("wall_seconds"));
}

TEST_CASE("QPT truncation rule grows with the photon number") {
    CHECK(qpt_truncation_rule(0.5, 1e-2, 64) == 64);
    const int a = qpt_truncation_rule(1.5, 1e-2, 64);
    const int b = qpt_truncation_rule(2.0, 1e-2, 64);
    const int c = qpt_truncation_rule(2.0, 1e-3, 64);
    CHECK(a >= 64);
    CHECK(b > a);
    CHECK(c > b);
    // at least the mean photon number (g^2 - g^-2)/4 / (w/gamma)
    const double min_photons = (4.0 - 0.25) / 4 / 1e-3;
    CHECK(c >= min_photons);
}

TEST_CASE("QPT points in both phases") {
    QptOptions o;
    o.omega_over_gamma = 1e-2;
    const auto np = qpt_point(0.5, o, TruncationPolicy::adaptive());
    REQUIRE(np.ok());
    CHECK(np.record.negativity == doctest::Approx(0.5).epsilon(0.02));
    CHECK(np.record.n_rescaled < 1e-3);
    CHECK(np.host_block == "H_minus");
    const auto sp = qpt_point(1.5, o, TruncationPolicy::adaptive());
    REQUIRE(sp.ok());
    CHECK(sp.record.n_rescaled == doctest::Approx((2.25 - 1 / 2.25) / 4).epsilon(0.05));
    CHECK(sp.n_max >= 64);
}

TEST_CASE("a truncation cap below the need marks the point failed") {
    QptOptions o;
    o.omega_over_gamma = 1e-3;
    const auto p = qpt_point(2.0, o, TruncationPolicy::adaptive(64, 128));
    CHECK_FALSE(p.ok());
    CHECK(p.status == "TruncationTooSmall");
    CHECK_FALSE(p.message.empty());
}

TEST_CASE("QPT scan CSV and failed fraction") {
    QptOptions o;
    const auto grid = qpt_grid({"g", 0.5, 1.5, 5}, o, TruncationPolicy::adaptive());
    const auto r = scan_qpt(grid, o, 2);
    CHECK(r.failed_fraction() == 0.0);
    const std::string csv = qpt_csv(r);
    CHECK(csv.rfind("g,omega_over_gamma,energy,energy_rescaled,n_mean,n_rescaled,negativity,m_stag,gap,host_block,status\n", 0) == 0);
    CHECK(csv == qpt_csv(scan_qpt(grid, o, 1)));
}

TEST_CASE("critical point from a kinked curve") {
    std::vector<double> g, v;
    for (int i = 0; i <= 40; ++i) {
        g.push_back(0.5 + 0.025 * i);
        v.push_back(std::max(0.0, g.back() - 1.1));
    }
    const auto cp = estimate_critical_point(g, v);
    CHECK(cp.g_star == doctest::Approx(1.1).epsilon(0.03));
    CHECK(cp.second_diff.size() == g.size() - 2);
    CHECK(cp.index >= 1);
}

TEST_CASE("critical point input checks") {
    std::vector<double> g = {0, 1, 2, 3, 4, 5};
    std::vector<double> v(6, 0.0);
    CHECK_THROWS_AS(estimate_critical_point(g, v), Error);
    g.push_back(6);
    v.push_back(0.0);
    try {
        estimate_critical_point(g, v);
        FAIL("flat curve accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewFeatures);
    }
    g[3] = 3.5;
    v[4] = 1.0;
    try {
        estimate_critical_point(g, v);
        FAIL("non-uniform grid accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidParam);
    }
}

TEST_CASE("version string") { CHECK_FALSE(version().empty()); }
