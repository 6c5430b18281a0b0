#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "acal/pilot.hpp"
#include "test_support.hpp"

#include <numeric>

using namespace acal;
using acal::test::Gen;

TEST_CASE("full-band spec") {
    const auto spec = PilotSpec::full_band(16, 3);
    CHECK(spec.fft_size == 16);
    CHECK(spec.seed == 3);
    REQUIRE(spec.active_bins.size() == 16);
    CHECK(spec.active_bins.front() == 0);
    CHECK(spec.active_bins.back() == 15);
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("spec validation") {
    PilotSpec spec;
    spec.fft_size = 8;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.active_bins = {1, 3, 8};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.active_bins = {3, 1};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.active_bins = {1, 1};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.active_bins = {1, 3};
    CHECK_NOTHROW(spec.validate());
    spec.fft_size = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("property: QPSK symbols on active bins, zeros elsewhere") {
    Gen g(5);
    for (int i = 0; i < 60; ++i) {
        PilotSpec spec;
        spec.fft_size = g.index(1, 600);
        spec.seed = g.engine()();
        for (std::size_t k = 0; k < spec.fft_size; ++k) {
            if (g.uniform(0, 1) < 0.4) {
                spec.active_bins.push_back(k);
            }
        }
        if (spec.active_bins.empty()) {
            spec.active_bins.push_back(0);
        }
        const auto p = generate_pilot(spec);
        const auto mask = bin_mask(spec.active_bins, spec.fft_size);
        REQUIRE(p.spectrum.size() == spec.fft_size);
        REQUIRE(p.waveform.size() == spec.fft_size);
        for (std::size_t k = 0; k < spec.fft_size; ++k) {
            if (mask[k]) {
                const cplx s = p.spectrum[k];
                CHECK(std::abs(std::abs(s) - 1.0) < 1e-15);
                CHECK(std::abs(std::abs(s.real()) - std::sqrt(0.5)) < 1e-15);
                CHECK(std::abs(std::abs(s.imag()) - std::sqrt(0.5)) < 1e-15);
            } else {
                CHECK(p.spectrum[k] == cplx{});
            }
        }
        const auto back = dft(p.waveform);
        CHECK(acal::test::max_abs_diff(back.vector(), p.spectrum.vector()) < 1e-12);
    }
}

TEST_CASE("pilot determinism and seed sensitivity") {
    const auto a = generate_pilot(PilotSpec::full_band(256, 9));
    const auto b = generate_pilot(PilotSpec::full_band(256, 9));
    const auto c = generate_pilot(PilotSpec::full_band(256, 10));
    CHECK(a.spectrum == b.spectrum);
    CHECK(a.waveform == b.waveform);
    CHECK_FALSE(a.spectrum == c.spectrum);
}

TEST_CASE("QPSK constellation is used evenly") {
    const auto p = generate_pilot(PilotSpec::full_band(4096, 1));
    int counts[4] = {0, 0, 0, 0};
    for (const auto& s : p.spectrum) {
        counts[(s.real() > 0 ? 0 : 1) + (s.imag() > 0 ? 0 : 2)]++;
    }
    for (int c : counts) {
        CHECK(c > 900);
        CHECK(c < 1150);
    }
}

TEST_CASE("experimental mask") {
    const auto m = experimental_mask(1024);
    REQUIRE(m.size() == 200);
    CHECK(m.front() == 412);
    CHECK(m[99] == 511);
    CHECK(m[100] == 513);
    CHECK(m.back() == 612);
    CHECK(std::find(m.begin(), m.end(), 512u) == m.end());

    const auto m2 = experimental_mask(2048);
    CHECK(m2.size() == 400);
    CHECK(m2.front() == 824);
    CHECK(m2.back() == 1224);

    const auto m3 = experimental_mask(16);
    CHECK(m3 == std::vector<std::size_t>{6, 7, 9, 10});
    CHECK_THROWS_AS(experimental_mask(8), std::invalid_argument);
}

TEST_CASE("bin mask") {
    const auto m = bin_mask({0, 2}, 4);
    CHECK(m == std::vector<bool>{true, false, true, false});
    CHECK_THROWS_AS(bin_mask({4}, 4), std::invalid_argument);
}
