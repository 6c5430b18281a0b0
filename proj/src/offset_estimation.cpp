#include "acal/calibration.hpp"
#include "acal/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace acal {

LagWindow LagWindow::default_for(std::size_t fft_size) {
    const long quarter = static_cast<long>(fft_size / 4);
    return LagWindow{-quarter, quarter};
}

namespace {

void check_pilot_spectrum(const Spectrum& Y, const Spectrum& X) {
    if (Y.size() != X.size()) {
        throw std::invalid_argument("observation has " + std::to_string(Y.size()) + " bins, pilot has " +
                                    std::to_string(X.size()));
    }
    for (const auto& x : X) {
        const double mag = std::abs(x);
        if (mag != 0.0 && std::abs(mag - 1.0) > 1e-9) {
            throw std::invalid_argument("pilot bins must be zero or unit-modulus");
        }
    }
}

std::vector<cplx> correlate(const Spectrum& Y, const Spectrum& X, double kappa) {
    const std::size_t n = Y.size();
    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        z[k] = X[k] == cplx{} ? cplx{} : Y[k] * delay_phasor(k, n, kappa) * std::conj(X[k]);
    }
    return inverse_transform(z);
}

} // namespace

ComplexSequence matched_filter(const Spectrum& Y, const Spectrum& X, double kappa) {
    check_pilot_spectrum(Y, X);
    if (!std::isfinite(kappa)) {
        throw std::invalid_argument("fractional shift must be finite");
    }
    return ComplexSequence(correlate(Y, X, kappa));
}

OffsetEstimate estimate_offsets(const Spectrum& Y, const Spectrum& X, double kappa_step,
                                std::optional<LagWindow> window) {
    check_pilot_spectrum(Y, X);
    if (!(kappa_step > 0.0 && kappa_step <= 0.5)) {
        throw std::invalid_argument("kappa step must lie in (0, 0.5]");
    }
    const std::size_t n = Y.size();
    const LagWindow win = window.value_or(LagWindow::default_for(n));
    if (win.first >= win.last || win.last - win.first > static_cast<long>(n) ||
        std::abs(win.first) > static_cast<long>(n) || std::abs(win.last) > static_cast<long>(n)) {
        throw std::invalid_argument("invalid lag search window [" + std::to_string(win.first) + ", " +
                                    std::to_string(win.last) + ")");
    }

    const auto steps = static_cast<long>(std::floor(1.0 / kappa_step + 1e-9));
    double best_mag = -1.0;
    long best_lag = 0;
    double best_kappa = 0.0;
    cplx best_value{};
    for (long i = 0; i <= steps; ++i) {
        const double kappa = -0.5 + static_cast<double>(i) * kappa_step;
        const auto c = correlate(Y, X, kappa);
        for (long lag = win.first; lag < win.last; ++lag) {
            const long idx = ((lag % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n);
            const cplx v = c[static_cast<std::size_t>(idx)];
            const double mag = std::abs(v);
            bool take = mag > best_mag;
            if (mag == best_mag) {
                take = lag < best_lag || (lag == best_lag && std::abs(kappa) < std::abs(best_kappa));
            }
            if (take) {
                best_mag = mag;
                best_lag = lag;
                best_kappa = kappa;
                best_value = v;
            }
        }
    }
    if (!(best_mag > 0.0)) {
        throw EstimationError("matched filter has no peak (observation is zero on the pilot bins)");
    }

    OffsetEstimate est;
    est.ell = best_lag;
    est.eps = best_kappa == 0.0 ? 0.0 : -best_kappa;
    est.tau = static_cast<double>(est.ell) + est.eps;
    est.phi = std::arg(best_value);
    if (est.phi <= -kPi) {
        est.phi = kPi;
    }
    est.peak_magnitude = best_mag;
    est.kappa_step = kappa_step;
    return est;
}

} // namespace acal
