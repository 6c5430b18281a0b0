#pragma once

#include "acal/array_model.hpp"
#include "acal/calibration.hpp"
#include "acal/pilot.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace acal {

// JSON documents. Doubles are written in shortest round-trip form, so a
// write/read cycle reproduces every value exactly. Malformed documents raise
// DataError.

std::string ensemble_to_json(const ImpairmentEnsemble& ensemble);
ImpairmentEnsemble ensemble_from_json(const std::string& text);
void write_ensemble(const ImpairmentEnsemble& ensemble, const std::filesystem::path& path);
ImpairmentEnsemble read_ensemble(const std::filesystem::path& path);

struct ExportedChannel {
    std::size_t channel = 0;
    OffsetEstimate estimate;
    std::optional<ComplexSequence> f_taps;  // FIR mode
    std::size_t latency = 0;
    Spectrum compensation;  // F[k], latency removed; zero on inactive bins in direct mode
};

/// Everything needed to apply or evaluate a calibration without rerunning it.
struct FilterExport {
    CompensationMode mode = CompensationMode::fir;
    std::size_t fft_size = 0;
    std::size_t delay_taps = 0;
    std::size_t equalizer_taps = 0;
    double lambda = 0.0;
    double target_gain = 1.0;
    double kappa_step = 0.0;
    std::vector<std::size_t> active_bins;
    std::vector<ExportedChannel> channels;

    std::vector<Spectrum> compensations() const;
};

FilterExport make_filter_export(const CalibrationConfig& cfg, const PilotSpec& pilot,
                                const std::vector<ChannelCalibration>& cals);

std::string filter_export_to_json(const FilterExport& fx);
FilterExport filter_export_from_json(const std::string& text);
void write_filter_export(const FilterExport& fx, const std::filesystem::path& path);
FilterExport read_filter_export(const std::filesystem::path& path);

} // namespace acal
