#include "acal/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace acal {

void ArrayGeometry::validate() const {
    if (channels < 1) {
        throw std::invalid_argument("array needs at least one channel");
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw std::invalid_argument("element spacing must be positive");
    }
}

std::vector<cplx> steering_vector(const ArrayGeometry& geom, double theta_deg) {
    geom.validate();
    if (!(theta_deg >= -90.0 && theta_deg <= 90.0)) {
        throw std::invalid_argument("steering angle must lie in [-90, 90] degrees");
    }
    const double s = std::sin(theta_deg * kPi / 180.0);
    std::vector<cplx> a(geom.channels);
    for (std::size_t m = 0; m < geom.channels; ++m) {
        a[m] = std::polar(1.0, -2.0 * kPi * geom.spacing * static_cast<double>(m) * s);
    }
    return a;
}

ChannelImpairment ChannelImpairment::ideal(std::size_t fft_size) {
    return ChannelImpairment{0.0, 0.0, std::vector<double>(fft_size, 1.0)};
}

void ChannelImpairment::validate(std::size_t fft_size) const {
    if (gain.size() != fft_size) {
        throw std::invalid_argument("gain curve has " + std::to_string(gain.size()) + " bins, expected " +
                                    std::to_string(fft_size));
    }
    for (double g : gain) {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw std::invalid_argument("gain curve must be finite and strictly positive");
        }
    }
    if (!std::isfinite(tau) || std::abs(tau) >= static_cast<double>(fft_size) / 4.0) {
        throw std::invalid_argument("timing offset must satisfy |tau| < N/4");
    }
    if (!std::isfinite(phi)) {
        throw std::invalid_argument("phase offset must be finite");
    }
}

Spectrum channel_response(const ChannelImpairment& imp, std::size_t fft_size) {
    imp.validate(fft_size);
    const cplx rot = std::polar(1.0, imp.phi);
    std::vector<cplx> h(fft_size);
    for (std::size_t k = 0; k < fft_size; ++k) {
        h[k] = imp.gain[k] * delay_phasor(k, fft_size, imp.tau) * rot;
    }
    return Spectrum(std::move(h));
}

std::string to_string(ImpairmentProfile profile) {
    switch (profile) {
    case ImpairmentProfile::none:
        return "none";
    case ImpairmentProfile::nominal:
        return "default";
    }
    return "unknown";
}

ImpairmentProfile parse_impairment_profile(const std::string& text) {
    if (text == "none") {
        return ImpairmentProfile::none;
    }
    if (text == "default") {
        return ImpairmentProfile::nominal;
    }
    throw std::invalid_argument("unknown impairment profile '" + text + "' (expected none|default)");
}

std::size_t ImpairmentEnsemble::fft_size() const {
    if (channels.empty()) {
        throw std::invalid_argument("empty impairment ensemble");
    }
    return channels.front().gain.size();
}

namespace {

// G[k] = g0·(1 + α·Σ_p r_p cos(2πpk/N + ψ_p)), α chosen so the curve's
// peak-to-peak spread equals ripple_db exactly.
std::vector<double> ripple_curve(std::mt19937_64& rng, std::size_t n, double g0, double ripple_db) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    double r[3];
    double psi[3];
    for (int p = 0; p < 3; ++p) {
        r[p] = unit(rng);
        psi[p] = phase(rng);
    }
    std::vector<double> shape(n);
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (int p = 0; p < 3; ++p) {
            s += r[p] * std::cos(2.0 * kPi * (p + 1) * static_cast<double>(k) / static_cast<double>(n) + psi[p]);
        }
        shape[k] = s;
    }
    const auto [lo, hi] = std::minmax_element(shape.begin(), shape.end());
    const double smin = *lo;
    const double smax = *hi;
    const double ratio = std::pow(10.0, ripple_db / 20.0);
    double alpha = 0.0;
    if (smax - ratio * smin > 0.0 && smax > smin) {
        alpha = (ratio - 1.0) / (smax - ratio * smin);
    }
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) {
        g[k] = std::max(g0 * (1.0 + alpha * shape[k]), 1e-6 * g0);
    }
    return g;
}

} // namespace

ImpairmentEnsemble sample_ensemble(std::size_t channels, std::size_t fft_size, std::uint64_t seed,
                                   ImpairmentProfile profile) {
    if (channels < 1) {
        throw std::invalid_argument("ensemble needs at least one channel");
    }
    if (fft_size < 8) {
        throw std::invalid_argument("ensemble FFT size must be at least 8");
    }
    ImpairmentEnsemble ens;
    ens.seed = seed;
    ens.profile = profile;
    ens.channels.reserve(channels);
    if (profile == ImpairmentProfile::none) {
        for (std::size_t m = 0; m < channels; ++m) {
            ens.channels.push_back(ChannelImpairment::ideal(fft_size));
        }
        return ens;
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> tau_dist(-kMaxTimingOffset, kMaxTimingOffset);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> level_db(-1.0, 1.0);
    std::uniform_real_distribution<double> ripple_db(0.5, kMaxRippleDb);
    // N < 16 cannot host |tau| up to 2 with |tau| < N/4.
    const double tau_limit = std::min(kMaxTimingOffset, static_cast<double>(fft_size) / 4.0 - 1e-9);
    for (std::size_t m = 0; m < channels; ++m) {
        ChannelImpairment imp;
        imp.tau = std::clamp(tau_dist(rng), -tau_limit, tau_limit);
        // Map U[0,1) onto (-π, π].
        imp.phi = kPi - 2.0 * kPi * unit(rng);
        const double g0 = std::pow(10.0, level_db(rng) / 20.0);
        imp.gain = ripple_curve(rng, fft_size, g0, ripple_db(rng));
        ens.channels.push_back(std::move(imp));
    }
    return ens;
}

} // namespace acal
