#include "acal/sim_frontend.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace acal {

void NoiseSpec::validate() const {
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("noise power must be finite and non-negative");
    }
}

std::size_t CaptureSet::length() const {
    if (channels.empty()) {
        throw std::invalid_argument("capture set has no channels");
    }
    return channels.front().size();
}

void CaptureSet::validate() const {
    const std::size_t n = length();
    for (std::size_t m = 0; m < channels.size(); ++m) {
        if (channels[m].size() != n) {
            throw std::invalid_argument("capture channel " + std::to_string(m) + " has length " +
                                        std::to_string(channels[m].size()) + ", expected " + std::to_string(n));
        }
    }
}

namespace {

// Substream for (channel, frame); frame index kPlanewaveFrame marks the
// single frame of a plane-wave capture.
std::mt19937_64 noise_stream(std::uint64_t seed, std::size_t channel, std::size_t frame) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(channel), static_cast<std::uint32_t>(frame)};
    return std::mt19937_64(seq);
}

void add_noise(std::vector<cplx>& samples, double sigma2, std::mt19937_64& rng, double weight) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
    for (auto& s : samples) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        s += weight * cplx{re, im};
    }
}

constexpr std::size_t kPlanewaveFrame = 0xFFFF;

} // namespace

CaptureSet simulate_selfcal(const PilotSpec& pilot_spec, const ImpairmentEnsemble& ensemble,
                            const std::optional<Spectrum>& common_path, const NoiseSpec& noise,
                            unsigned repetitions) {
    noise.validate();
    if (repetitions < 1) {
        throw std::invalid_argument("repetition count must be at least 1");
    }
    if (ensemble.size() < 1) {
        throw std::invalid_argument("empty impairment ensemble");
    }
    const std::size_t n = pilot_spec.fft_size;
    if (ensemble.fft_size() != n) {
        throw std::invalid_argument("ensemble gain curves have " + std::to_string(ensemble.fft_size()) +
                                    " bins but the pilot uses N=" + std::to_string(n));
    }
    if (common_path && common_path->size() != n) {
        throw std::invalid_argument("common calibration path response must have N bins");
    }
    const Pilot pilot = generate_pilot(pilot_spec);

    CaptureSet set;
    set.origin = CaptureOrigin::simulated;
    set.seed = noise.seed;
    set.channels.reserve(ensemble.size());
    for (std::size_t m = 0; m < ensemble.size(); ++m) {
        const Spectrum h = channel_response(ensemble.channels[m], n);
        std::vector<cplx> y(n);
        for (std::size_t k = 0; k < n; ++k) {
            y[k] = h[k] * pilot.spectrum[k];
            if (common_path) {
                y[k] *= (*common_path)[k];
            }
        }
        // The noiseless part is identical in every frame, so the coherent
        // average is that frame plus the mean of the per-frame noise.
        std::vector<cplx> samples = inverse_transform(y);
        if (noise.sigma2 > 0.0) {
            const double weight = 1.0 / static_cast<double>(repetitions);
            for (unsigned r = 0; r < repetitions; ++r) {
                auto rng = noise_stream(noise.seed, m, r);
                add_noise(samples, noise.sigma2, rng, weight);
            }
        }
        set.channels.emplace_back(std::move(samples));
    }
    return set;
}

CaptureSet simulate_planewave(double theta_deg, const ComplexSequence& waveform,
                              const ImpairmentEnsemble& ensemble, const ArrayGeometry& geom,
                              const NoiseSpec& noise) {
    noise.validate();
    geom.validate();
    if (ensemble.size() != geom.channels) {
        throw std::invalid_argument("ensemble has " + std::to_string(ensemble.size()) + " channels, geometry has " +
                                    std::to_string(geom.channels));
    }
    const std::size_t n = waveform.size();
    if (ensemble.fft_size() != n) {
        throw std::invalid_argument("waveform length must equal the ensemble FFT size");
    }
    const auto a = steering_vector(geom, theta_deg);
    const auto u = forward_transform(waveform.values());

    CaptureSet set;
    set.origin = CaptureOrigin::simulated;
    set.seed = noise.seed;
    for (std::size_t m = 0; m < geom.channels; ++m) {
        const Spectrum h = channel_response(ensemble.channels[m], n);
        std::vector<cplx> r(n);
        for (std::size_t k = 0; k < n; ++k) {
            r[k] = h[k] * u[k];
        }
        r = inverse_transform(r);
        for (auto& v : r) {
            v *= a[m];
        }
        if (noise.sigma2 > 0.0) {
            auto rng = noise_stream(noise.seed, m, kPlanewaveFrame);
            add_noise(r, noise.sigma2, rng, 1.0);
        }
        set.channels.emplace_back(std::move(r));
    }
    return set;
}

CaptureSet quantize_to_f32(const CaptureSet& set) {
    CaptureSet out = set;
    out.channels.clear();
    for (const auto& ch : set.channels) {
        std::vector<cplx> q(ch.size());
        for (std::size_t i = 0; i < ch.size(); ++i) {
            q[i] = cplx{static_cast<double>(static_cast<float>(ch[i].real())),
                        static_cast<double>(static_cast<float>(ch[i].imag()))};
        }
        out.channels.emplace_back(std::move(q));
    }
    return out;
}

} // namespace acal
