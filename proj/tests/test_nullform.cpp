#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "acal/errors.hpp"
#include "acal/experiment.hpp"
#include "acal/nullform.hpp"
#include "test_support.hpp"

#include <numeric>

using namespace acal;
using acal::test::Gen;

namespace {

cplx inner(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    cplx s{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += std::conj(x[i]) * y[i];
    }
    return s;
}

double norm2(const std::vector<cplx>& x) { return std::sqrt(std::real(inner(x, x))); }

std::vector<std::size_t> all_bins(std::size_t n) {
    std::vector<std::size_t> b(n);
    std::iota(b.begin(), b.end(), std::size_t{0});
    return b;
}

std::vector<Spectrum> constant_responses(std::size_t m, std::size_t n, cplx value) {
    return std::vector<Spectrum>(m, Spectrum(std::vector<cplx>(n, value)));
}

// Random per-channel responses with moderate spread.
std::vector<Spectrum> random_responses(Gen& g, std::size_t m, std::size_t n) {
    std::vector<Spectrum> out;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<cplx> v(n);
        for (auto& x : v) {
            x = std::polar(g.uniform(0.7, 1.3), g.uniform(-0.5, 0.5));
        }
        out.emplace_back(std::move(v));
    }
    return out;
}

} // namespace

TEST_CASE("null-forming vector for the 8-element, 25/0 degree configuration") {
    const ArrayGeometry geom{8, 0.5};
    const auto b = nullform_vector(geom, 25.0, 0.0);
    const auto a0 = steering_vector(geom, 25.0);
    const auto a1 = steering_vector(geom, 0.0);
    CHECK(std::abs(inner(b, a1)) <= 1e-12 * norm2(b) * std::sqrt(8.0));
    // Independent form: a0 minus its projection onto a1.
    const cplx coef = inner(a1, a0) / 8.0;
    for (std::size_t m = 0; m < 8; ++m) {
        CHECK(std::abs(b[m] - (a0[m] - coef * a1[m])) < 1e-14);
    }
}

TEST_CASE("orthogonal steering vectors are left unchanged") {
    const ArrayGeometry geom{4, 0.5};
    const auto a0 = steering_vector(geom, 30.0);
    const auto a1 = steering_vector(geom, 0.0);
    REQUIRE(std::abs(inner(a1, a0)) < 1e-14);
    const auto b = nullform_vector(geom, 30.0, 0.0);
    CHECK(acal::test::max_abs_diff(b, a0) < 1e-14);
}

TEST_CASE("degenerate projections are rejected") {
    CHECK_THROWS_AS(nullform_vector({8, 0.5}, 10.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(nullform_vector({1, 0.5}, 10.0, 20.0), std::invalid_argument);
    CHECK_THROWS_AS(nullform_vector({8, 0.5}, 90.0, -90.0), std::invalid_argument);
}

TEST_CASE("property: projection exactness on random geometries") {
    Gen g(1);
    for (int i = 0; i < 500; ++i) {
        const ArrayGeometry geom{g.index(2, 16), g.uniform(0.2, 0.5)};
        const double t0 = g.uniform(-89.0, 89.0);
        double t1 = g.uniform(-89.0, 89.0);
        if (std::abs(t1 - t0) < 1.0) {
            t1 = t0 > 0 ? t0 - 10.0 : t0 + 10.0;
        }
        const auto b = nullform_vector(geom, t0, t1);
        const auto a1 = steering_vector(geom, t1);
        CHECK(std::abs(inner(b, a1)) <= 1e-12 * norm2(b) * std::sqrt(static_cast<double>(geom.channels)));
    }
}

TEST_CASE("equalized response layout and checks") {
    const ArrayGeometry geom{3, 0.5};
    Gen g(2);
    const auto h = random_responses(g, 3, 16);
    const auto f = random_responses(g, 3, 16);
    const std::vector<std::size_t> bins{1, 4, 9};
    const auto eta = equalized_response(geom, h, f, bins);
    REQUIRE(eta.per_channel.size() == 3);
    for (std::size_t m = 0; m < 3; ++m) {
        REQUIRE(eta.per_channel[m].size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(eta.per_channel[m][i] == f[m][bins[i]] * h[m][bins[i]]);
        }
    }
    CHECK(eta.bin_index(9) == 2);
    CHECK_THROWS_AS(eta.bin_index(2), std::invalid_argument);

    const auto raw = equalized_response(geom, h, {}, bins);
    CHECK(raw.per_channel[1][0] == h[1][1]);

    CHECK_THROWS_AS(equalized_response(geom, h, {}, {4, 1}), std::invalid_argument);
    CHECK_THROWS_AS(equalized_response(geom, h, {}, {16}), std::invalid_argument);
    CHECK_THROWS_AS(equalized_response(geom, {h[0], h[1]}, {}, bins), std::invalid_argument);
    CHECK_THROWS_AS(equalized_response(geom, h, {f[0]}, bins), std::invalid_argument);
}

TEST_CASE("ideal channels give an exact null") {
    const ArrayGeometry geom{8, 0.5};
    const auto h = constant_responses(8, 64, 1.0);
    const auto eta = equalized_response(geom, h, {}, all_bins(64));
    const auto b = nullform_vector(geom, 25.0, 0.0);
    const auto rep = nulling_ratio(b, eta, 25.0, 0.0, all_bins(64));
    CHECK(rep.q_avg_db <= -200.0);
    CHECK(rep.q_linear.size() == 64);

    std::vector<double> grid;
    for (int i = -900; i <= 900; ++i) {
        grid.push_back(0.1 * i);
    }
    const auto pat = beampattern(b, eta, 5, grid);
    CHECK(pat[900] <= -200.0);  // θ = 0
    const auto peak = std::max_element(pat.begin(), pat.end());
    CHECK(*peak == 0.0);
    CHECK(pat[900 + 250] > -0.5);  // θ0 lies on the main lobe
    CHECK(std::abs(grid[static_cast<std::size_t>(peak - pat.begin())] - 25.0) < 3.0);
}

TEST_CASE("flat equalized response gives the same pattern at every bin") {
    const ArrayGeometry geom{6, 0.5};
    const auto h = constant_responses(6, 32, std::polar(0.7, 0.2));
    const auto eta = equalized_response(geom, h, {}, all_bins(32));
    const auto b = nullform_vector(geom, -20.0, 15.0);
    const auto grid = angle_grid(1.0);
    const auto p3 = beampattern(b, eta, 3, grid);
    const auto p20 = beampattern(b, eta, 20, grid);
    CHECK(p3 == p20);
    CHECK_THROWS_AS(beampattern(b, eta, 3, {}), std::invalid_argument);
}

TEST_CASE("beam power against the direct sum") {
    const ArrayGeometry geom{4, 0.5};
    Gen g(3);
    const auto h = random_responses(g, 4, 8);
    const auto eta = equalized_response(geom, h, {}, all_bins(8));
    const auto b = nullform_vector(geom, 10.0, -30.0);
    const std::vector<double> grid{-60.0, -30.0, 0.0, 10.0, 45.0};
    const auto p = beam_power(b, eta, 6, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto a = steering_vector(geom, grid[i]);
        cplx s{};
        for (std::size_t m = 0; m < 4; ++m) {
            s += std::conj(b[m]) * h[m][6] * a[m];
        }
        CHECK(p[i] == doctest::Approx(std::norm(s)).epsilon(1e-12));
    }
}

TEST_CASE("property: scale and common-gain invariance of Q") {
    Gen g(4);
    for (int i = 0; i < 50; ++i) {
        const std::size_t m = g.index(2, 10);
        const ArrayGeometry geom{m, 0.5};
        const std::size_t n = 32;
        const auto h = random_responses(g, m, n);
        const auto bins = all_bins(n);
        const double t0 = g.uniform(10.0, 60.0);
        const double t1 = g.uniform(-60.0, 0.0);
        const auto b = nullform_vector(geom, t0, t1);
        const auto base = nulling_ratio(b, equalized_response(geom, h, {}, bins), t0, t1, bins);

        auto scaled = b;
        const cplx c = std::polar(g.uniform(0.01, 100.0), g.uniform(-kPi, kPi));
        for (auto& v : scaled) {
            v *= c;
        }
        const auto rs = nulling_ratio(scaled, equalized_response(geom, h, {}, bins), t0, t1, bins);

        std::vector<cplx> common(n);
        for (auto& v : common) {
            v = std::polar(g.uniform(0.1, 10.0), g.uniform(-kPi, kPi));
        }
        const auto comp = std::vector<Spectrum>(m, Spectrum(common));
        const auto rc = nulling_ratio(b, equalized_response(geom, h, comp, bins), t0, t1, bins);
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(rs.q_linear[k] == doctest::Approx(base.q_linear[k]).epsilon(1e-9));
            CHECK(rc.q_linear[k] == doctest::Approx(base.q_linear[k]).epsilon(1e-9));
        }
    }
}

TEST_CASE("property: Q statistics are linear-domain") {
    Gen g(5);
    for (int i = 0; i < 30; ++i) {
        const std::size_t n = g.index(2, 64);
        const ArrayGeometry geom{5, 0.5};
        const auto h = random_responses(g, 5, n);
        const auto bins = all_bins(n);
        const auto b = nullform_vector(geom, 30.0, -10.0);
        const auto rep = nulling_ratio(b, equalized_response(geom, h, {}, bins), 30.0, -10.0, bins);
        double mean = 0.0;
        for (double q_db : rep.q_db) {
            mean += std::pow(10.0, q_db / 10.0);
        }
        mean /= static_cast<double>(n);
        CHECK(std::abs(rep.q_avg_linear - mean) <= 1e-9 * mean);
        CHECK(std::abs(rep.q_avg_db - 10.0 * std::log10(mean)) < 1e-9);
        double var = 0.0;
        for (double q : rep.q_linear) {
            var += (q - rep.q_avg_linear) * (q - rep.q_avg_linear);
        }
        CHECK(rep.q_std_db == doctest::Approx(10.0 * std::log10(std::sqrt(var / static_cast<double>(n)))));
        CHECK(rep.theta0_deg == 30.0);
        CHECK(rep.bins == bins);
    }
}

TEST_CASE("zero desired-direction power is an evaluation error") {
    const ArrayGeometry geom{4, 0.5};
    auto h = constant_responses(4, 8, 1.0);
    std::vector<cplx> zero(8, 1.0);
    zero[3] = 0.0;
    const auto comp = std::vector<Spectrum>(4, Spectrum(zero));
    const auto eta = equalized_response(geom, h, comp, all_bins(8));
    const auto b = nullform_vector(geom, 20.0, 0.0);
    try {
        nulling_ratio(b, eta, 20.0, 0.0, all_bins(8));
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(std::string(e.what()).find("bin 3") != std::string::npos);
    }
    CHECK_THROWS_AS(nulling_ratio(b, eta, 20.0, 0.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(nulling_ratio({1.0, 1.0}, eta, 20.0, 0.0, {1}), std::invalid_argument);
}

TEST_CASE("monotone improvement under the default ensemble") {
    for (std::uint64_t seed : {2u, 3u, 5u}) {
        Experiment exp;
        exp.set_master_seed(seed);
        const auto r = run_experiment(exp);
        REQUIRE(r.onestage.has_value());
        CHECK(r.post.report.q_avg_db < r.onestage->report.q_avg_db);
        CHECK(r.onestage->report.q_avg_db < r.pre.report.q_avg_db);
    }
}

TEST_CASE("masked-band average uses the active-bin count") {
    Experiment exp;
    exp.geometry.channels = 7;
    exp.bin_mode = BinMode::experimental;
    exp.calibration.mode = CompensationMode::direct;
    exp.pattern_bins = {422, 482, 542, 602};
    exp.set_master_seed(1);
    const auto r = run_experiment(exp);
    CHECK(r.post.report.bins.size() == 200);
    CHECK(r.post.report.q_linear.size() == 200);
    CHECK_FALSE(r.onestage.has_value());
}
