#pragma once

#include "acal/signal_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace acal::test {

/// Seeded generator for the hand-rolled property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    double normal() { return std::normal_distribution<double>()(rng_); }
    cplx complex_normal() { return {normal(), normal()}; }

    std::vector<cplx> vec(std::size_t n) {
        std::vector<cplx> v(n);
        for (auto& x : v) {
            x = complex_normal();
        }
        return v;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// O(N²) reference transform; sign = -1 forward, +1 inverse (unscaled).
inline std::vector<cplx> direct_dft(const std::vector<cplx>& x, int sign) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = sign * 2.0 * kPi * static_cast<double>((k * t) % n) / static_cast<double>(n);
            acc += x[t] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

inline std::vector<cplx> direct_linear_conv(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

inline std::vector<cplx> direct_circular_conv(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[(i + j) % a.size()] += a[i] * b[j];
        }
    }
    return out;
}

template <class A, class B>
double max_abs_diff(const A& a, const B& b) {
    double m = 0.0;
    auto ib = b.begin();
    for (auto ia = a.begin(); ia != a.end(); ++ia, ++ib) {
        m = std::max(m, std::abs(*ia - *ib));
    }
    return m;
}

template <class A>
double max_abs(const A& a) {
    double m = 0.0;
    for (const auto& v : a) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);
    return a <= -kPi ? a + 2.0 * kPi : a;
}

} // namespace acal::test
