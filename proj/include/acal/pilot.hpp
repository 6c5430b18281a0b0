#pragma once

#include "acal/signal_core.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace acal {

/// Known calibration waveform, defined per DFT bin. Active bins carry
/// unit-modulus QPSK symbols; every other bin is zero.
struct PilotSpec {
    std::size_t fft_size = 1024;
    std::vector<std::size_t> active_bins;  // sorted, unique, < fft_size
    std::uint64_t seed = 1;

    static PilotSpec full_band(std::size_t fft_size, std::uint64_t seed);
    void validate() const;
};

struct Pilot {
    PilotSpec spec;
    ComplexSequence waveform;  // x[n] = idft(X)
    Spectrum spectrum;         // X[k]
};

Pilot generate_pilot(const PilotSpec& spec);

/// Two equal blocks either side of bin N/2, excluding N/2 itself. Each block
/// holds round(100·N/1024) bins, so N = 1024 gives [412,511] ∪ [513,612].
std::vector<std::size_t> experimental_mask(std::size_t fft_size);

/// Boolean view of an active-bin list.
std::vector<bool> bin_mask(const std::vector<std::size_t>& bins, std::size_t fft_size);

} // namespace acal
