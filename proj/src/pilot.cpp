#include "acal/pilot.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace acal {

PilotSpec PilotSpec::full_band(std::size_t fft_size, std::uint64_t seed) {
    PilotSpec spec;
    spec.fft_size = fft_size;
    spec.active_bins.resize(fft_size);
    std::iota(spec.active_bins.begin(), spec.active_bins.end(), std::size_t{0});
    spec.seed = seed;
    return spec;
}

void PilotSpec::validate() const {
    if (fft_size < 1) {
        throw std::invalid_argument("pilot FFT size must be positive");
    }
    if (active_bins.empty()) {
        throw std::invalid_argument("pilot needs at least one active bin");
    }
    for (std::size_t i = 0; i < active_bins.size(); ++i) {
        if (active_bins[i] >= fft_size) {
            throw std::invalid_argument("active bin " + std::to_string(active_bins[i]) + " is out of range for N=" +
                                        std::to_string(fft_size));
        }
        if (i > 0 && active_bins[i] <= active_bins[i - 1]) {
            throw std::invalid_argument("active bins must be strictly increasing");
        }
    }
}

Pilot generate_pilot(const PilotSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> symbol(0, 3);
    std::vector<cplx> X(spec.fft_size, cplx{});
    for (std::size_t k : spec.active_bins) {
        // e^{jπ/4}, e^{j3π/4}, e^{j5π/4}, e^{j7π/4}
        const int q = symbol(rng);
        const double r = std::sqrt(0.5);
        X[k] = cplx{(q == 0 || q == 3) ? r : -r, (q < 2) ? r : -r};
    }
    Spectrum spectrum(std::move(X));
    ComplexSequence waveform = idft(spectrum);
    return Pilot{spec, std::move(waveform), std::move(spectrum)};
}

std::vector<std::size_t> experimental_mask(std::size_t fft_size) {
    if (fft_size < 16) {
        throw std::invalid_argument("experimental mask needs N >= 16");
    }
    const std::size_t center = fft_size / 2;
    const auto width = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(100.0 * static_cast<double>(fft_size) / 1024.0)));
    std::vector<std::size_t> bins;
    bins.reserve(2 * width);
    for (std::size_t k = center - width; k < center; ++k) {
        bins.push_back(k);
    }
    for (std::size_t k = center + 1; k <= center + width && k < fft_size; ++k) {
        bins.push_back(k);
    }
    return bins;
}

std::vector<bool> bin_mask(const std::vector<std::size_t>& bins, std::size_t fft_size) {
    std::vector<bool> mask(fft_size, false);
    for (std::size_t k : bins) {
        if (k >= fft_size) {
            throw std::invalid_argument("bin index out of range");
        }
        mask[k] = true;
    }
    return mask;
}

} // namespace acal
