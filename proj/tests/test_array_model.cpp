#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "acal/array_model.hpp"
#include "test_support.hpp"

#include <algorithm>

using namespace acal;
using acal::test::Gen;

TEST_CASE("geometry validation") {
    CHECK_NOTHROW(ArrayGeometry{8, 0.5}.validate());
    CHECK_THROWS_AS((ArrayGeometry{0, 0.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ArrayGeometry{4, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ArrayGeometry{4, -1.0}.validate()), std::invalid_argument);
}

TEST_CASE("steering vector examples") {
    const auto a0 = steering_vector({8, 0.5}, 0.0);
    for (const auto& v : a0) {
        CHECK(std::abs(v - cplx(1, 0)) < 1e-15);
    }
    const auto a90 = steering_vector({2, 0.5}, 90.0);
    REQUIRE(a90.size() == 2);
    CHECK(std::abs(a90[0] - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(a90[1] - std::polar(1.0, -kPi)) < 1e-15);
    CHECK_THROWS_AS(steering_vector({8, 0.5}, 90.5), std::invalid_argument);
    CHECK_THROWS_AS(steering_vector({8, 0.5}, -91.0), std::invalid_argument);
}

TEST_CASE("property: steering vectors have unit-modulus entries and norm M") {
    Gen g(1);
    for (int i = 0; i < 200; ++i) {
        const ArrayGeometry geom{g.index(1, 32), g.uniform(0.1, 2.0)};
        const double theta = g.uniform(-90.0, 90.0);
        const auto a = steering_vector(geom, theta);
        REQUIRE(a.size() == geom.channels);
        double n2 = 0.0;
        for (std::size_t m = 0; m < a.size(); ++m) {
            CHECK(std::abs(std::abs(a[m]) - 1.0) < 1e-14);
            const double ph = -2.0 * kPi * geom.spacing * m * std::sin(theta * kPi / 180.0);
            CHECK(std::abs(a[m] - std::polar(1.0, ph)) < 1e-12);
            n2 += std::norm(a[m]);
        }
        CHECK(n2 == doctest::Approx(static_cast<double>(geom.channels)).epsilon(1e-14));
    }
}

TEST_CASE("conventional beam peaks at its steering angle on a 0.1 degree grid") {
    const ArrayGeometry geom{8, 0.5};
    for (double theta0 : {-60.0, -25.0, 0.0, 13.7, 25.0, 70.0}) {
        const auto b = steering_vector(geom, theta0);
        double best = -1.0, best_theta = 0.0;
        for (int i = -900; i <= 900; ++i) {
            const double th = 0.1 * i;
            const auto a = steering_vector(geom, th);
            cplx s{};
            for (std::size_t m = 0; m < 8; ++m) {
                s += std::conj(b[m]) * a[m];
            }
            if (std::norm(s) > best) {
                best = std::norm(s);
                best_theta = th;
            }
        }
        CHECK(std::abs(best_theta - theta0) <= 0.05 + 1e-9);
    }
}

TEST_CASE("channel response examples") {
    const auto ideal = channel_response(ChannelImpairment::ideal(64), 64);
    for (const auto& v : ideal) {
        CHECK(v == cplx(1, 0));
    }
    ChannelImpairment d1 = ChannelImpairment::ideal(32);
    d1.tau = 1.0;
    const auto h = channel_response(d1, 32);
    for (std::size_t k = 0; k < 32; ++k) {
        CHECK(std::abs(h[k] - std::polar(1.0, -2.0 * kPi * k / 32.0)) < 1e-15);
    }
    CHECK_THROWS_AS(channel_response(ChannelImpairment::ideal(16), 32), std::invalid_argument);
}

TEST_CASE("impairment validation") {
    ChannelImpairment imp = ChannelImpairment::ideal(16);
    CHECK_NOTHROW(imp.validate(16));
    imp.tau = 4.0;
    CHECK_THROWS_AS(imp.validate(16), std::invalid_argument);
    imp.tau = 3.99;
    CHECK_NOTHROW(imp.validate(16));
    imp.gain[3] = 0.0;
    CHECK_THROWS_AS(imp.validate(16), std::invalid_argument);
    CHECK_THROWS_AS(ChannelImpairment::ideal(8).validate(16), std::invalid_argument);
}

TEST_CASE("property: |H| equals the gain curve") {
    Gen g(2);
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = g.index(8, 512);
        ChannelImpairment imp;
        imp.tau = g.uniform(-1.9, 1.9);
        imp.phi = g.uniform(-kPi, kPi);
        for (std::size_t k = 0; k < n; ++k) {
            imp.gain.push_back(g.uniform(0.1, 3.0));
        }
        const auto h = channel_response(imp, n);
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(std::abs(std::abs(h[k]) - imp.gain[k]) <= 1e-14 * imp.gain[k]);
        }
    }
}

TEST_CASE("property: integer delay is a circular shift") {
    Gen g(3);
    for (int i = 0; i < 40; ++i) {
        const std::size_t n = g.index(16, 300);
        const long tau = static_cast<long>(g.index(0, n / 4 - 1)) * (i % 2 ? -1 : 1);
        ChannelImpairment imp;
        imp.tau = static_cast<double>(tau);
        imp.phi = g.uniform(-kPi, kPi);
        for (std::size_t k = 0; k < n; ++k) {
            imp.gain.push_back(g.uniform(0.5, 2.0));
        }
        const auto x = g.vec(n);
        const auto h = channel_response(imp, n);
        std::vector<cplx> hx(n), gx(n);
        for (std::size_t k = 0; k < n; ++k) {
            hx[k] = h[k] * x[k];
            gx[k] = imp.gain[k] * x[k] * std::polar(1.0, imp.phi);
        }
        const auto y = idft(Spectrum(hx));
        const auto z = idft(Spectrum(gx));
        const long nn = static_cast<long>(n);
        for (long t = 0; t < nn; ++t) {
            const auto src = static_cast<std::size_t>(((t - tau) % nn + nn) % nn);
            CHECK(std::abs(y[static_cast<std::size_t>(t)] - z[src]) < 1e-10);
        }
    }
}

TEST_CASE("ensemble determinism and the none profile") {
    const auto a = sample_ensemble(8, 1024, 42);
    const auto b = sample_ensemble(8, 1024, 42);
    REQUIRE(a.size() == 8);
    for (std::size_t m = 0; m < 8; ++m) {
        CHECK(a.channels[m].tau == b.channels[m].tau);
        CHECK(a.channels[m].phi == b.channels[m].phi);
        CHECK(a.channels[m].gain == b.channels[m].gain);
    }
    const auto c = sample_ensemble(8, 1024, 43);
    CHECK(c.channels[0].tau != a.channels[0].tau);

    const auto none = sample_ensemble(5, 64, 42, ImpairmentProfile::none);
    for (const auto& imp : none.channels) {
        CHECK(imp.tau == 0.0);
        CHECK(imp.phi == 0.0);
        CHECK(std::all_of(imp.gain.begin(), imp.gain.end(), [](double v) { return v == 1.0; }));
    }
    CHECK_THROWS_AS(sample_ensemble(0, 64, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_ensemble(2, 4, 1), std::invalid_argument);
}

TEST_CASE("default profile statistics over 10^4 draws") {
    const auto ens = sample_ensemble(10000, 64, 7);
    double tau_min = 1e9, tau_max = -1e9, worst_ripple_db = 0.0;
    bool gains_positive = true, phi_in_range = true;
    double tau_sum = 0.0;
    for (const auto& imp : ens.channels) {
        tau_min = std::min(tau_min, imp.tau);
        tau_max = std::max(tau_max, imp.tau);
        tau_sum += imp.tau;
        phi_in_range = phi_in_range && imp.phi > -kPi && imp.phi <= kPi;
        const auto [lo, hi] = std::minmax_element(imp.gain.begin(), imp.gain.end());
        gains_positive = gains_positive && *lo > 0.0;
        worst_ripple_db = std::max(worst_ripple_db, 20.0 * std::log10(*hi / *lo));
    }
    CHECK(tau_min >= -kMaxTimingOffset);
    CHECK(tau_max <= kMaxTimingOffset);
    CHECK(tau_min < -1.99);
    CHECK(tau_max > 1.99);
    CHECK(std::abs(tau_sum / 10000.0) < 0.05);
    CHECK(gains_positive);
    CHECK(phi_in_range);
    CHECK(worst_ripple_db <= kMaxRippleDb + 1e-9);
}

TEST_CASE("small DFT sizes keep |tau| below N/4") {
    const auto ens = sample_ensemble(200, 8, 11);
    for (const auto& imp : ens.channels) {
        CHECK_NOTHROW(imp.validate(8));
    }
}

TEST_CASE("profile names") {
    CHECK(to_string(ImpairmentProfile::nominal) == "default");
    CHECK(parse_impairment_profile("none") == ImpairmentProfile::none);
    CHECK(parse_impairment_profile("default") == ImpairmentProfile::nominal);
    CHECK_THROWS_AS(parse_impairment_profile("severe"), std::invalid_argument);
}
