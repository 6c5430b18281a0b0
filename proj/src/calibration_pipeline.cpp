#include "acal/calibration.hpp"
#include "acal/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace acal {

std::string to_string(CompensationMode mode) { return mode == CompensationMode::fir ? "fir" : "direct"; }

CompensationMode parse_compensation_mode(const std::string& text) {
    if (text == "fir") {
        return CompensationMode::fir;
    }
    if (text == "direct") {
        return CompensationMode::direct;
    }
    throw std::invalid_argument("unknown compensation mode '" + text + "' (expected fir|direct)");
}

std::size_t CalibrationConfig::resolved_equalizer_latency() const {
    return equalizer_latency.value_or(equalizer_taps > 0 ? (equalizer_taps - 1) / 2 : 0);
}

void CalibrationConfig::validate() const {
    if (delay_taps < 3 || delay_taps % 2 == 0) {
        throw std::invalid_argument("delay_taps must be odd and >= 3");
    }
    if (equalizer_taps < 1) {
        throw std::invalid_argument("equalizer_taps must be >= 1");
    }
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("lambda must be >= 0");
    }
    if (!(target_gain > 0.0)) {
        throw std::invalid_argument("target gain must be > 0");
    }
    if (!(kappa_step > 0.0 && kappa_step <= 0.5)) {
        throw std::invalid_argument("kappa_step must lie in (0, 0.5]");
    }
    if (resolved_equalizer_latency() >= equalizer_taps) {
        throw std::invalid_argument("equalizer latency must be shorter than the equalizer");
    }
}

Spectrum capture_spectrum(const ComplexSequence& channel, std::size_t fft_size) {
    if (fft_size == 0 || channel.size() % fft_size != 0) {
        throw std::invalid_argument("capture length " + std::to_string(channel.size()) +
                                    " is not a whole number of " + std::to_string(fft_size) + "-sample frames");
    }
    const std::size_t frames = channel.size() / fft_size;
    std::vector<cplx> avg(fft_size, cplx{});
    const auto samples = channel.values();
    for (std::size_t r = 0; r < frames; ++r) {
        for (std::size_t i = 0; i < fft_size; ++i) {
            avg[i] += samples[r * fft_size + i];
        }
    }
    if (frames > 1) {
        for (auto& v : avg) {
            v /= static_cast<double>(frames);
        }
    }
    return Spectrum(forward_transform(avg));
}

namespace {

Spectrum response_estimate(const Spectrum& y, const Spectrum& x) {
    std::vector<cplx> h(y.size(), cplx{});
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (x[k] != cplx{}) {
            h[k] = y[k] * std::conj(x[k]);
        }
    }
    return Spectrum(std::move(h));
}

// Rethrows with the channel index attached, keeping the error category.
template <class Fn>
auto with_channel(std::size_t m, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (...) {
        rethrow_with_context("channel " + std::to_string(m) + ": ");
    }
}

void check_captures(const CaptureSet& captures, const Pilot& pilot) {
    captures.validate();
    if (captures.length() % pilot.spec.fft_size != 0) {
        throw std::invalid_argument("capture length " + std::to_string(captures.length()) +
                                    " is not a multiple of the pilot length " +
                                    std::to_string(pilot.spec.fft_size));
    }
}

ChannelCalibration calibrate_channel(std::size_t m, const Spectrum& y, const Pilot& pilot,
                                     const CalibrationConfig& cfg) {
    const std::size_t n = pilot.spec.fft_size;
    const auto& active = pilot.spec.active_bins;
    OffsetEstimate est = estimate_offsets(y, pilot.spectrum, cfg.kappa_step, cfg.search_window);
    Spectrum h_hat = response_estimate(y, pilot.spectrum);

    if (cfg.mode == CompensationMode::direct) {
        // Gain estimate is the magnitude of the raw response, so the phase
        // correction comes from the offset estimate alone.
        std::vector<cplx> g(n, cplx{});
        for (std::size_t k : active) {
            g[k] = std::abs(h_hat[k]);
        }
        Spectrum g_hat(std::move(g));
        Spectrum comp = direct_compensation_response(est, g_hat, cfg.target_gain, active);
        return ChannelCalibration{m, est, std::move(h_hat), std::nullopt, std::move(comp)};
    }

    const FractionalDelayFilter d = design_fractional_delay(est, cfg.delay_taps);
    const std::size_t eq_latency = cfg.resolved_equalizer_latency();
    // Ĝ = D·Ĥ with D referenced eq_latency samples ahead of its center tap,
    // so the causal equalizer is fit around its own middle tap.
    const Spectrum d_resp = fir_response(d.taps, n, d.latency + eq_latency);
    std::vector<cplx> g(n, cplx{});
    for (std::size_t k : active) {
        g[k] = d_resp[k] * h_hat[k];
    }
    EqualizerConfig eq{cfg.equalizer_taps, cfg.lambda, cfg.target_gain, active};
    const ComplexSequence q = design_equalizer(Spectrum(std::move(g)), eq);
    CalibrationFilter filter = compose_filter(d, q, cfg.target_gain, eq_latency);
    Spectrum comp = filter_response(filter, n);
    return ChannelCalibration{m, est, std::move(h_hat), std::move(filter), std::move(comp)};
}

} // namespace

std::vector<ChannelCalibration> calibrate_array(const CaptureSet& captures, const Pilot& pilot,
                                                const CalibrationConfig& cfg) {
    cfg.validate();
    check_captures(captures, pilot);
    std::vector<ChannelCalibration> out;
    out.reserve(captures.num_channels());
    for (std::size_t m = 0; m < captures.num_channels(); ++m) {
        out.push_back(with_channel(m, [&] {
            const Spectrum y = capture_spectrum(captures.channels[m], pilot.spec.fft_size);
            return calibrate_channel(m, y, pilot, cfg);
        }));
    }
    return out;
}

std::vector<Spectrum> onestage_compensation(const CaptureSet& captures, const Pilot& pilot,
                                            const CalibrationConfig& cfg) {
    cfg.validate();
    check_captures(captures, pilot);
    const std::size_t n = pilot.spec.fft_size;
    const std::size_t length = cfg.delay_taps + cfg.equalizer_taps - 1;
    EqualizerConfig eq{cfg.equalizer_taps, cfg.lambda, cfg.target_gain, pilot.spec.active_bins};
    std::vector<Spectrum> out;
    for (std::size_t m = 0; m < captures.num_channels(); ++m) {
        out.push_back(with_channel(m, [&] {
            const Spectrum y = capture_spectrum(captures.channels[m], n);
            const ComplexSequence q = design_onestage_baseline(response_estimate(y, pilot.spectrum), length, eq);
            return fir_response(q, n);
        }));
    }
    return out;
}

} // namespace acal
