#pragma once

#include "acal/signal_core.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace acal {

/// Uniform linear array; spacing in carrier wavelengths, phase reference at
/// the first element.
struct ArrayGeometry {
    std::size_t channels = 8;
    double spacing = 0.5;

    void validate() const;
};

/// a_m(θ) = exp(-j2π·spacing·m·sin θ), m = 0..M-1. θ in degrees, [-90, 90].
std::vector<cplx> steering_vector(const ArrayGeometry& geom, double theta_deg);

/// Ground-truth impairment of one receive chain.
struct ChannelImpairment {
    double tau = 0.0;          // samples, may be fractional
    double phi = 0.0;          // radians
    std::vector<double> gain;  // G[k] > 0, one entry per DFT bin

    static ChannelImpairment ideal(std::size_t fft_size);
    void validate(std::size_t fft_size) const;
};

/// H[k] = G[k]·exp(-j2π·k·τ/N)·exp(jφ), with k taken as the signed bin index.
Spectrum channel_response(const ChannelImpairment& imp, std::size_t fft_size);

enum class ImpairmentProfile {
    none,     // every channel ideal
    nominal,  // "default": τ ~ U[-2,2], φ ~ U(-π,π], ≤ 3 dB cosine ripple
};

std::string to_string(ImpairmentProfile profile);
ImpairmentProfile parse_impairment_profile(const std::string& text);

struct ImpairmentEnsemble {
    std::vector<ChannelImpairment> channels;
    std::uint64_t seed = 0;
    ImpairmentProfile profile = ImpairmentProfile::nominal;

    std::size_t size() const noexcept { return channels.size(); }
    std::size_t fft_size() const;
};

/// Deterministic in (M, N, seed, profile).
ImpairmentEnsemble sample_ensemble(std::size_t channels, std::size_t fft_size, std::uint64_t seed,
                                   ImpairmentProfile profile = ImpairmentProfile::nominal);

// Nominal-profile bounds, exposed for tests.
inline constexpr double kMaxTimingOffset = 2.0;
inline constexpr double kMaxRippleDb = 3.0;

} // namespace acal
