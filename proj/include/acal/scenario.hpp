#pragma once

#include "acal/experiment.hpp"
#include "acal/serialization.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace acal {

enum class GainUnit { linear, db };

/// A scenario as read from an INI file. Schema (unknown sections and keys
/// are rejected):
///
///   [scenario]     name, seed
///   [array]        channels, spacing
///   [pilot]        fft_size, active_bins (full | experimental | bin list),
///                  repetitions, seed
///   [impairments]  profile (none | default), seed
///   [noise]        sigma2, seed
///   [calibration]  mode (fir | direct), delay_taps, equalizer_taps, lambda,
///                  target_gain | target_gain_db, kappa_step,
///                  equalizer_latency, search_window (first,last)
///   [evaluation]   theta0_deg, theta1_deg, bins (active | bin list),
///                  pattern_bins (none | bin list), pattern_step_deg
///   [sweep]        sigma2 (comma-separated list)
///   [output]       dir, capture_csv
///
/// Bin lists are comma-separated indices or inclusive ranges "a-b". The
/// per-stream seeds default to values derived from [scenario] seed.
struct ScenarioConfig {
    std::string name = "custom";
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> pilot_seed;
    std::optional<std::uint64_t> impairment_seed;
    std::optional<std::uint64_t> noise_seed;
    GainUnit target_gain_unit = GainUnit::linear;
    double target_gain_value = 1.0;  // in target_gain_unit
    Experiment experiment;           // fully resolved
    std::vector<double> sweep_sigma2 = default_sweep_sigma2();
    std::filesystem::path output_dir = "runs/custom";
    bool capture_csv = false;
};

/// `section.key = value`, applied on top of presets and files.
struct ConfigOverride {
    std::string key;
    std::string value;
};

ConfigOverride parse_override(const std::string& text);

std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);

/// Layers, in order: preset, config file text, overrides. A later layer that
/// sets [scenario] seed drops per-stream seeds from earlier layers, and one
/// that sets either target gain key drops the other. Throws ConfigError with
/// the offending section and key.
ScenarioConfig load_config(const std::optional<std::string>& preset, const std::optional<std::string>& file_text,
                           const std::vector<ConfigOverride>& overrides = {});

ScenarioConfig parse_config(const std::string& text);

/// Canonical INI text; parse_config(to_ini(c)) reproduces c.
std::string to_ini(const ScenarioConfig& cfg);

std::string format_bins(const std::vector<std::size_t>& bins);

// ---------------------------------------------------------------------------
// Run directories

inline constexpr const char* kIncompleteMarker = "INCOMPLETE";

struct RunOutcome {
    std::filesystem::path dir;
    ExperimentResult result;
};

/// simulate → calibrate → evaluate, persisting config.ini, ensemble.json,
/// capture.iq, estimates.csv, filters.json, nulling_ratio.csv,
/// beampattern_{pre,post,onestage}.csv, summary.json and run.log.
/// The INCOMPLETE marker is present until every artifact is written.
RunOutcome run_scenario(const ScenarioConfig& cfg);

/// Writes sweep.csv (one row per σ², ascending) into the output directory.
std::vector<SweepRow> run_noise_sweep(const ScenarioConfig& cfg, const std::vector<double>& sigma2_list);

struct FileCalibration {
    Pilot pilot;
    CaptureSet captures;
    std::vector<ChannelCalibration> calibrations;
    FilterExport filters;
};

/// Calibrates an externally produced capture file with the scenario's pilot
/// and calibration settings; writes estimates.csv and filters.json.
FileCalibration calibrate_from_file(const std::filesystem::path& capture_path, const ScenarioConfig& cfg);

/// Simulation only: config.ini, ensemble.json, pilot.iq, capture.iq
/// (and capture.csv when requested).
CaptureSet simulate_to_dir(const ScenarioConfig& cfg);

struct EvaluationOutcome {
    Evaluation pre;
    std::optional<Evaluation> post;
};

/// Evaluates a filter export (or none) against a ground-truth ensemble;
/// writes nulling_ratio.csv, beampattern CSVs and summary.json.
EvaluationOutcome evaluate_to_dir(const ScenarioConfig& cfg, const ImpairmentEnsemble& ensemble,
                                  const std::optional<FilterExport>& filters);

// Emitters shared by the verbs above.
std::string nulling_ratio_csv(const std::vector<std::size_t>& bins, const std::vector<std::string>& labels,
                              const std::vector<const NullformReport*>& reports);
std::string beampattern_csv(const std::vector<double>& theta_deg, const std::vector<std::size_t>& bins,
                            const std::vector<std::vector<double>>& beam_power);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string estimates_csv(const std::vector<ChannelCalibration>& cals, const ImpairmentEnsemble* truth);

} // namespace acal
