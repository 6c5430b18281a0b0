#pragma once

#include "acal/pilot.hpp"
#include "acal/sim_frontend.hpp"
#include "acal/signal_core.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace acal {

/// Joint integer/fractional timing and phase estimate for one channel.
/// tau == ell + eps exactly, |eps| <= 0.5.
struct OffsetEstimate {
    long ell = 0;
    double eps = 0.0;
    double tau = 0.0;
    double phi = 0.0;  // radians, (-π, π]
    double peak_magnitude = 0.0;
    double kappa_step = 0.01;
};

/// Signed lag range [first, last) searched for the matched-filter peak.
/// Negative lags wrap to the top of the IDFT output.
struct LagWindow {
    long first = 0;
    long last = 0;

    static LagWindow default_for(std::size_t fft_size);
};

/// c[n] = (1/N) Σ_k Y[k]·e^{-j2πkκ/N}·X*[k]·e^{+j2πkn/N}, k the signed bin
/// index in the fractional shift. X must be zero or unit-modulus per bin.
ComplexSequence matched_filter(const Spectrum& Y, const Spectrum& X, double kappa);

/// Exhaustive search over κ ∈ {-0.5, -0.5+step, ..., 0.5} and the lag
/// window. Ties go to the smallest lag, then the smallest |κ|.
OffsetEstimate estimate_offsets(const Spectrum& Y, const Spectrum& X, double kappa_step,
                                std::optional<LagWindow> window = std::nullopt);

enum class WindowKind { hamming, rectangular };

/// Delay/phase compensator stage. Its response is
/// D[k] ≈ e^{+j2πkτ̂/N}·e^{-jφ̂}·e^{-j2πk·latency/N}.
struct FractionalDelayFilter {
    ComplexSequence taps;
    std::size_t latency = 0;  // (L_d - 1) / 2
};

FractionalDelayFilter design_fractional_delay(const OffsetEstimate& est, std::size_t length,
                                              WindowKind window = WindowKind::hamming);

struct EqualizerConfig {
    std::size_t taps = 33;
    double lambda = 1e-3;
    double target_gain = 1.0;
    std::vector<std::size_t> active_bins;  // rows of the LS problem

    void validate(std::size_t fft_size) const;
};

/// Regularized LS equalizer: minimizes ‖g0 - diag(Ĝ)Aq‖² + λ‖Aq‖² over the
/// active bins, [A]_{k,n} = e^{-j2πkn/N}, via the normal equations and an
/// LDLᴴ factorization. Throws IllConditionedError when cond(B) > 1e12.
ComplexSequence design_equalizer(const Spectrum& g_hat, const EqualizerConfig& cfg);

/// Condition numbers above this are refused by the equalizer solve.
inline constexpr double kMaxEqualizerCondition = 1e12;

struct CalibrationFilter {
    ComplexSequence d_taps;
    ComplexSequence q_taps;
    ComplexSequence f_taps;  // q * d
    double target_gain = 1.0;
    std::size_t latency = 0;  // fixed added delay of f in samples
};

/// f = q * d; latency = d latency + the delay the equalizer was designed for.
CalibrationFilter compose_filter(const FractionalDelayFilter& d, const ComplexSequence& q, double target_gain,
                                 std::size_t equalizer_latency = 0);

/// Single LS FIR of the given length fit directly to the raw response.
ComplexSequence design_onestage_baseline(const Spectrum& h, std::size_t length, const EqualizerConfig& cfg);

ComplexSequence apply_filter(const CalibrationFilter& filter, const ComplexSequence& y, ConvolutionMode mode);

/// N-point response of the composed filter with its fixed latency removed.
Spectrum filter_response(const CalibrationFilter& filter, std::size_t fft_size);

/// Same, for a bare FIR with a given latency.
Spectrum fir_response(const ComplexSequence& taps, std::size_t fft_size, std::size_t latency = 0);

/// Per active bin e^{+j2πkτ̂/N}·e^{-jφ̂}·G0/Ĝ[k]; zero on inactive bins.
Spectrum direct_compensation_response(const OffsetEstimate& est, const Spectrum& g_hat, double target_gain,
                                      const std::vector<std::size_t>& active_bins);

/// Ỹ[k] = Y[k]·e^{+j2πkτ̂/N}·e^{-jφ̂}·G0/Ĝ[k] on active bins.
Spectrum direct_frequency_compensation(const Spectrum& Y, const OffsetEstimate& est, const Spectrum& g_hat,
                                       double target_gain, const std::vector<std::size_t>& active_bins);

enum class CompensationMode { fir, direct };

std::string to_string(CompensationMode mode);
CompensationMode parse_compensation_mode(const std::string& text);

struct CalibrationConfig {
    std::size_t delay_taps = 81;
    std::size_t equalizer_taps = 33;
    double lambda = 1e-3;
    double target_gain = 1.0;
    double kappa_step = 0.01;
    CompensationMode mode = CompensationMode::fir;
    std::optional<LagWindow> search_window;
    // Delay the equalizer targets; defaults to (L_q - 1) / 2.
    std::optional<std::size_t> equalizer_latency;

    std::size_t resolved_equalizer_latency() const;
    void validate() const;
};

struct ChannelCalibration {
    std::size_t channel = 0;
    OffsetEstimate estimate;
    Spectrum response_estimate;  // Ĥ[k] = Y[k]X*[k], zero off the pilot
    std::optional<CalibrationFilter> filter;  // FIR mode only
    Spectrum compensation;  // F[k] with the fixed latency removed
};

/// Averages the frames of one capture channel into an N-point spectrum.
/// The channel length must be a positive multiple of N.
Spectrum capture_spectrum(const ComplexSequence& channel, std::size_t fft_size);

/// estimate → fractional delay → equalizer → compose, per channel (FIR mode),
/// or estimate → direct frequency compensation (direct mode).
std::vector<ChannelCalibration> calibrate_array(const CaptureSet& captures, const Pilot& pilot,
                                                const CalibrationConfig& cfg);

/// One-stage baseline for every channel of a capture, returned as
/// latency-free responses.
std::vector<Spectrum> onestage_compensation(const CaptureSet& captures, const Pilot& pilot,
                                            const CalibrationConfig& cfg);

} // namespace acal
