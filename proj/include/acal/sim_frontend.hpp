#pragma once

#include "acal/array_model.hpp"
#include "acal/pilot.hpp"
#include "acal/signal_core.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace acal {

struct NoiseSpec {
    double sigma2 = 0.0;  // per-sample complex noise power
    std::uint64_t seed = 0;

    void validate() const;
};

enum class CaptureOrigin : std::uint8_t { simulated, file };

/// Equal-length multi-channel baseband capture.
struct CaptureSet {
    std::vector<ComplexSequence> channels;
    double sample_rate = 0.0;  // Hz, metadata only
    CaptureOrigin origin = CaptureOrigin::simulated;
    std::uint64_t seed = 0;

    std::size_t num_channels() const noexcept { return channels.size(); }
    std::size_t length() const;
    void validate() const;
};

/// Self-calibration observations: per channel and frame,
/// Y_m = H_m·H'·X + W, with R frames averaged coherently. H' defaults to
/// all-ones. Noise for (channel m, frame r) comes from its own seeded
/// substream, so channels can be simulated independently.
CaptureSet simulate_selfcal(const PilotSpec& pilot, const ImpairmentEnsemble& ensemble,
                            const std::optional<Spectrum>& common_path, const NoiseSpec& noise,
                            unsigned repetitions);

/// Operational plane-wave reception r_m = a_m(θ)·(h_m ⊛ u) + w_m, with the
/// channel applied as a circular convolution.
CaptureSet simulate_planewave(double theta_deg, const ComplexSequence& waveform,
                              const ImpairmentEnsemble& ensemble, const ArrayGeometry& geom,
                              const NoiseSpec& noise);

/// Rounds every sample to single precision, as stored in a capture file.
CaptureSet quantize_to_f32(const CaptureSet& set);

// Capture file: little-endian, 28-byte header
//   "ACAL" | version u16 | M u16 | length u32 | sample_rate f64 | seed u64
// followed by M channels of `length` interleaved f32 I/Q pairs.
inline constexpr std::uint16_t kCaptureVersion = 1;
inline constexpr std::size_t kCaptureHeaderBytes = 28;

void write_capture(const CaptureSet& set, const std::filesystem::path& path);
CaptureSet read_capture(const std::filesystem::path& path);

/// Debug export: index, ch0_i, ch0_q, ch1_i, ...
void write_capture_csv(const CaptureSet& set, const std::filesystem::path& path);

} // namespace acal
