#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "acal/signal_core.hpp"
#include "test_support.hpp"

#include <limits>
#include <thread>

using namespace acal;
using acal::test::Gen;
using acal::test::max_abs;
using acal::test::max_abs_diff;

TEST_CASE("sequences reject empty and non-finite input") {
    CHECK_THROWS_AS(ComplexSequence(std::vector<cplx>{}), std::invalid_argument);
    CHECK_THROWS_AS(Spectrum(std::vector<cplx>{}), std::invalid_argument);
    CHECK_THROWS_AS(ComplexSequence({cplx(1, 0), cplx(std::numeric_limits<double>::quiet_NaN(), 0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Spectrum({cplx(0, std::numeric_limits<double>::infinity())}), std::invalid_argument);
    CHECK_THROWS_AS(forward_transform({}), std::invalid_argument);
    CHECK_THROWS_AS(inverse_transform({}), std::invalid_argument);
}

TEST_CASE("dft of an impulse is flat") {
    std::vector<cplx> d(8, cplx{});
    d[0] = 1.0;
    const Spectrum X = dft(ComplexSequence(d));
    REQUIRE(X.size() == 8);
    for (const auto& v : X) {
        CHECK(std::abs(v - cplx(1, 0)) < 1e-15);
    }
}

TEST_CASE("dft of a constant is DC only") {
    const Spectrum X = dft(ComplexSequence{1, 1, 1, 1});
    CHECK(std::abs(X[0] - cplx(4, 0)) < 1e-15);
    for (std::size_t k = 1; k < 4; ++k) {
        CHECK(std::abs(X[k]) < 1e-15);
    }
}

TEST_CASE("idft inverts the identity and DC cases") {
    const ComplexSequence x = idft(Spectrum(std::vector<cplx>(8, cplx(1, 0))));
    CHECK(std::abs(x[0] - cplx(1, 0)) < 1e-15);
    for (std::size_t n = 1; n < 8; ++n) {
        CHECK(std::abs(x[n]) < 1e-15);
    }
    const ComplexSequence c = idft(Spectrum{4, 0, 0, 0});
    for (const auto& v : c) {
        CHECK(std::abs(v - cplx(1, 0)) < 1e-15);
    }
}

TEST_CASE("dft and idft match the direct-sum oracle") {
    Gen g(16);
    for (std::size_t n : {1, 2, 3, 5, 7, 16, 17, 60, 97, 128, 243, 256}) {
        CAPTURE(n);
        const auto x = g.vec(n);
        const auto fwd = test::direct_dft(x, -1);
        auto inv = test::direct_dft(x, +1);
        for (auto& v : inv) {
            v /= static_cast<double>(n);
        }
        const double scale_f = std::max(1.0, max_abs(fwd));
        const double scale_i = std::max(1.0, max_abs(inv));
        CHECK(max_abs_diff(dft(ComplexSequence(x)), fwd) <= 1e-12 * scale_f);
        CHECK(max_abs_diff(idft(Spectrum(x)), inv) <= 1e-12 * scale_i);
    }
}

TEST_CASE("property: round trip, Parseval and linearity") {
    Gen g(4096);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = trial < 4 ? std::size_t{4096} >> trial : g.index(1, 4096);
        CAPTURE(n);
        const auto a = g.vec(n);
        const auto b = g.vec(n);
        const ComplexSequence sa(a);
        const Spectrum A = dft(sa);

        CHECK(max_abs_diff(idft(A), a) <= 1e-12 * max_abs(a));

        double ex = 0.0, eX = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ex += std::norm(a[i]);
            eX += std::norm(A[i]);
        }
        CHECK(std::abs(ex - eX / static_cast<double>(n)) <= 1e-10 * ex);

        const cplx alpha = g.complex_normal(), beta = g.complex_normal();
        std::vector<cplx> mix(n);
        for (std::size_t i = 0; i < n; ++i) {
            mix[i] = alpha * a[i] + beta * b[i];
        }
        const Spectrum M = dft(ComplexSequence(mix));
        const Spectrum B = dft(ComplexSequence(b));
        std::vector<cplx> expect(n);
        for (std::size_t k = 0; k < n; ++k) {
            expect[k] = alpha * A[k] + beta * B[k];
        }
        CHECK(max_abs_diff(M, expect) <= 1e-12 * std::max(1.0, max_abs(expect)));
    }
}

TEST_CASE("convolution identity element and binomial") {
    const ComplexSequence a{cplx(1, 2), cplx(-3, 0.5), cplx(0, -1), cplx(2, 2)};
    const ComplexSequence delta{1};
    for (auto mode : {ConvolutionMode::linear, ConvolutionMode::circular}) {
        const auto c = convolve(a, delta, mode);
        REQUIRE(c.size() == a.size());
        CHECK(max_abs_diff(c, a) < 1e-15);
    }
    const auto b = convolve(ComplexSequence{1, 1}, ComplexSequence{1, 1}, ConvolutionMode::linear);
    REQUIRE(b.size() == 3);
    CHECK(std::abs(b[0] - 1.0) < 1e-15);
    CHECK(std::abs(b[1] - 2.0) < 1e-15);
    CHECK(std::abs(b[2] - 1.0) < 1e-15);
}

TEST_CASE("convolution matches nested-loop oracles") {
    Gen g(32);
    const auto a = g.vec(32);
    const auto b = g.vec(32);
    const auto lin = convolve(ComplexSequence(a), ComplexSequence(b), ConvolutionMode::linear);
    const auto lin_ref = test::direct_linear_conv(a, b);
    REQUIRE(lin.size() == 63);
    CHECK(max_abs_diff(lin, lin_ref) <= 1e-12 * max_abs(lin_ref));
    const auto circ = convolve(ComplexSequence(a), ComplexSequence(b), ConvolutionMode::circular);
    const auto circ_ref = test::direct_circular_conv(a, b);
    REQUIRE(circ.size() == 32);
    CHECK(max_abs_diff(circ, circ_ref) <= 1e-12 * max_abs(circ_ref));
}

TEST_CASE("property: circular convolution theorem with zero-padded b") {
    Gen g(77);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = g.index(1, 300);
        const std::size_t m = g.index(1, n);
        const auto a = g.vec(n);
        const auto b = g.vec(m);
        auto bp = b;
        bp.resize(n, cplx{});
        const auto c = convolve(ComplexSequence(a), ComplexSequence(b), ConvolutionMode::circular);
        const Spectrum C = dft(c);
        const Spectrum A = dft(ComplexSequence(a));
        const Spectrum Bp = dft(ComplexSequence(bp));
        std::vector<cplx> prod(n);
        for (std::size_t k = 0; k < n; ++k) {
            prod[k] = A[k] * Bp[k];
        }
        CHECK(max_abs_diff(C, prod) <= 1e-10 * std::max(1.0, max_abs(prod)));
        const auto via_idft = idft(Spectrum(prod));
        CHECK(max_abs_diff(c, via_idft) <= 1e-10 * std::max(1.0, max_abs(via_idft)));
    }
}

TEST_CASE("circular convolution rejects a longer kernel") {
    CHECK_THROWS_AS(convolve(ComplexSequence{1, 2}, ComplexSequence{1, 2, 3}, ConvolutionMode::circular),
                    std::invalid_argument);
}

TEST_CASE("hamming window") {
    CHECK_THROWS_AS(hamming_window(0), std::invalid_argument);
    CHECK(hamming_window(1) == std::vector<double>{1.0});
    const auto w3 = hamming_window(3);
    REQUIRE(w3.size() == 3);
    CHECK(w3[0] == doctest::Approx(0.08).epsilon(1e-15));
    CHECK(w3[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w3[2] == doctest::Approx(0.08).epsilon(1e-15));
    for (std::size_t len = 2; len <= 201; ++len) {
        CAPTURE(len);
        const auto w = hamming_window(len);
        for (std::size_t n = 0; n < len; ++n) {
            CHECK(w[n] == w[len - 1 - n]);
            CHECK(w[n] == doctest::Approx(0.54 - 0.46 * std::cos(2.0 * kPi * n / (len - 1))).epsilon(1e-14));
        }
        CHECK(*std::max_element(w.begin(), w.end()) == w[(len - 1) / 2]);
    }
}

TEST_CASE("signed bin index and delay phasor") {
    CHECK(signed_bin(0, 8) == 0);
    CHECK(signed_bin(3, 8) == 3);
    CHECK(signed_bin(4, 8) == -4);
    CHECK(signed_bin(7, 8) == -1);
    CHECK(signed_bin(2, 5) == 2);
    CHECK(signed_bin(3, 5) == -2);

    for (std::size_t k = 0; k < 16; ++k) {
        const cplx expect = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / 16.0);
        CHECK(std::abs(delay_phasor(k, 16, 1.0) - expect) < 1e-15);
        CHECK(std::abs(delay_phasor(k, 16, 0.0) - cplx(1, 0)) == 0.0);
    }
    Gen g(3);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = g.index(2, 2048);
        const std::size_t k = g.index(0, n - 1);
        const double d1 = g.uniform(-5, 5), d2 = g.uniform(-5, 5);
        CHECK(std::abs(delay_phasor(k, n, d1) * delay_phasor(k, n, d2) - delay_phasor(k, n, d1 + d2)) < 1e-12);
        CHECK(std::abs(std::abs(delay_phasor(k, n, d1)) - 1.0) < 1e-15);
    }
}

TEST_CASE("power_db") {
    CHECK(power_db(1.0) == 0.0);
    CHECK(power_db(100.0) == doctest::Approx(20.0));
    CHECK(power_db(0.0) == doctest::Approx(-400.0));
}

TEST_CASE("transforms are safe to call concurrently") {
    Gen g(9);
    const auto x = g.vec(1000);
    const Spectrum ref = dft(ComplexSequence(x));
    std::vector<int> ok(8, 0);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            bool same = true;
            for (int r = 0; r < 50; ++r) {
                const std::size_t n = 200 + static_cast<std::size_t>(t * 37 + r);
                std::vector<cplx> y(x.begin(), x.begin() + static_cast<long>(n));
                const auto back = idft(dft(ComplexSequence(y)));
                same = same && max_abs_diff(back, y) < 1e-12 * 10;
                same = same && dft(ComplexSequence(x)) == ref;
            }
            ok[static_cast<std::size_t>(t)] = same ? 1 : 0;
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    for (int v : ok) {
        CHECK(v == 1);
    }
}
