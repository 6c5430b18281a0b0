#include "acal/calibration.hpp"
#include "acal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acal {

namespace {

double sinc(double x) {
    if (x == 0.0) {
        return 1.0;
    }
    if (x == std::round(x)) {
        return 0.0;
    }
    return std::sin(kPi * x) / (kPi * x);
}

} // namespace

FractionalDelayFilter design_fractional_delay(const OffsetEstimate& est, std::size_t length, WindowKind window) {
    if (length < 3 || length % 2 == 0) {
        throw std::invalid_argument("fractional-delay length must be odd and >= 3, got " + std::to_string(length));
    }
    const std::size_t center = (length - 1) / 2;
    if (!std::isfinite(est.tau) || std::abs(est.tau) >= static_cast<double>(center)) {
        throw std::invalid_argument("timing estimate does not fit inside the fractional-delay filter");
    }
    const cplx rot = std::polar(1.0, -est.phi);
    const double span = static_cast<double>(length - 1);
    std::vector<cplx> taps(length);
    // Group delay center - τ̂: advances the channel by τ̂ relative to the
    // fixed center-tap latency. The Hamming window slides with the sinc.
    for (std::size_t n = 0; n < length; ++n) {
        const double x = static_cast<double>(n) - static_cast<double>(center) + est.tau;
        const double u = x + static_cast<double>(center);
        double w = 1.0;
        if (window == WindowKind::hamming) {
            w = (u < 0.0 || u > span) ? 0.0 : 0.54 - 0.46 * std::cos(2.0 * kPi * u / span);
        }
        taps[n] = rot * (sinc(x) * w);
    }
    return FractionalDelayFilter{ComplexSequence(std::move(taps)), center};
}

CalibrationFilter compose_filter(const FractionalDelayFilter& d, const ComplexSequence& q, double target_gain,
                                 std::size_t equalizer_latency) {
    if (!(target_gain > 0.0)) {
        throw std::invalid_argument("target gain must be positive");
    }
    ComplexSequence f = convolve(q, d.taps, ConvolutionMode::linear);
    return CalibrationFilter{d.taps, q, std::move(f), target_gain, d.latency + equalizer_latency};
}

ComplexSequence design_onestage_baseline(const Spectrum& h, std::size_t length, const EqualizerConfig& cfg) {
    EqualizerConfig one = cfg;
    one.taps = length;
    return design_equalizer(h, one);
}

ComplexSequence apply_filter(const CalibrationFilter& filter, const ComplexSequence& y, ConvolutionMode mode) {
    if (mode == ConvolutionMode::circular && filter.f_taps.size() > y.size()) {
        throw std::invalid_argument("circular filtering needs a frame at least as long as the filter");
    }
    return convolve(y, filter.f_taps, mode);
}

Spectrum fir_response(const ComplexSequence& taps, std::size_t fft_size, std::size_t latency) {
    if (taps.size() > fft_size) {
        throw std::invalid_argument("filter of " + std::to_string(taps.size()) + " taps exceeds N=" +
                                    std::to_string(fft_size));
    }
    std::vector<cplx> padded(fft_size, cplx{});
    std::copy(taps.begin(), taps.end(), padded.begin());
    auto response = forward_transform(padded);
    if (latency != 0) {
        for (std::size_t k = 0; k < fft_size; ++k) {
            response[k] *= delay_phasor(k, fft_size, -static_cast<double>(latency));
        }
    }
    return Spectrum(std::move(response));
}

Spectrum filter_response(const CalibrationFilter& filter, std::size_t fft_size) {
    return fir_response(filter.f_taps, fft_size, filter.latency);
}

Spectrum direct_compensation_response(const OffsetEstimate& est, const Spectrum& g_hat, double target_gain,
                                      const std::vector<std::size_t>& active_bins) {
    if (!(target_gain > 0.0)) {
        throw std::invalid_argument("target gain must be positive");
    }
    const std::size_t n = g_hat.size();
    double peak = 0.0;
    for (std::size_t k : active_bins) {
        if (k >= n) {
            throw std::invalid_argument("active bin out of range");
        }
        peak = std::max(peak, std::abs(g_hat[k]));
    }
    const cplx rot = std::polar(1.0, -est.phi);
    std::vector<cplx> c(n, cplx{});
    for (std::size_t k : active_bins) {
        const double mag = std::abs(g_hat[k]);
        if (!(mag > 1e-12 * peak) || mag == 0.0) {
            throw NumericalError("gain estimate vanishes at active bin " + std::to_string(k) +
                                 " (division guard)");
        }
        c[k] = delay_phasor(k, n, -est.tau) * rot * (target_gain / g_hat[k]);
    }
    return Spectrum(std::move(c));
}

Spectrum direct_frequency_compensation(const Spectrum& Y, const OffsetEstimate& est, const Spectrum& g_hat,
                                       double target_gain, const std::vector<std::size_t>& active_bins) {
    if (Y.size() != g_hat.size()) {
        throw std::invalid_argument("observation and gain estimate sizes differ");
    }
    const Spectrum c = direct_compensation_response(est, g_hat, target_gain, active_bins);
    std::vector<cplx> out(Y.size(), cplx{});
    for (std::size_t k : active_bins) {
        out[k] = Y[k] * c[k];
    }
    return Spectrum(std::move(out));
}

} // namespace acal
