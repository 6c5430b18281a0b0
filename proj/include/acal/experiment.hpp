#pragma once

#include "acal/array_model.hpp"
#include "acal/calibration.hpp"
#include "acal/nullform.hpp"
#include "acal/pilot.hpp"
#include "acal/sim_frontend.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace acal {

enum class BinMode { full, experimental, custom };

std::string to_string(BinMode mode);

/// Derives an independent sub-seed from a master seed (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Everything needed to simulate, calibrate and evaluate one scenario.
struct Experiment {
    ArrayGeometry geometry{8, 0.5};
    std::size_t fft_size = 1024;
    BinMode bin_mode = BinMode::full;
    std::vector<std::size_t> custom_bins;
    unsigned repetitions = 4;

    std::uint64_t pilot_seed = 1;
    ImpairmentProfile profile = ImpairmentProfile::nominal;
    std::uint64_t impairment_seed = 1;
    NoiseSpec noise{1e-6, 1};
    std::optional<Spectrum> common_path;

    CalibrationConfig calibration;

    double theta0_deg = 25.0;
    double theta1_deg = 0.0;
    std::vector<std::size_t> eval_bins;  // empty: all active bins
    std::vector<std::size_t> pattern_bins{422, 482, 542, 602};
    double pattern_step_deg = 0.5;

    /// Seeds every stream from one master seed.
    void set_master_seed(std::uint64_t seed);

    std::vector<std::size_t> active_bins() const;
    std::vector<std::size_t> resolved_eval_bins() const;
    PilotSpec pilot_spec() const;
    bool onestage_applicable() const { return calibration.mode == CompensationMode::fir; }
    void validate() const;
};

/// Null-forming metrics plus raw beam power (linear) per pattern bin.
struct Evaluation {
    NullformReport report;
    std::vector<std::vector<double>> beam_power;  // [pattern bin][angle]
};

struct ExperimentResult {
    Pilot pilot;
    ImpairmentEnsemble ensemble;
    CaptureSet captures;
    std::vector<ChannelCalibration> calibrations;
    std::vector<double> theta_grid_deg;
    Evaluation pre;
    Evaluation post;
    std::optional<Evaluation> onestage;
};

std::vector<Spectrum> true_responses(const ImpairmentEnsemble& ensemble);

std::vector<double> angle_grid(double step_deg);

/// Evaluates a compensation set (empty = uncalibrated) against ground truth.
Evaluation evaluate_compensation(const Experiment& exp, const ImpairmentEnsemble& ensemble,
                                 const std::vector<Spectrum>& compensations);

std::vector<Spectrum> compensations_of(const std::vector<ChannelCalibration>& cals);

/// simulate → calibrate → evaluate pre / post / one-stage.
ExperimentResult run_experiment(const Experiment& exp);

/// Same as run_experiment but calibrates the supplied captures.
ExperimentResult run_experiment_on(const Experiment& exp, CaptureSet captures);

struct SweepRow {
    double sigma2 = 0.0;
    double q_pre_db = 0.0;
    double q_post_db = 0.0;
    std::optional<double> q_onestage_db;
    double std_pre_db = 0.0;
    double std_post_db = 0.0;
    std::optional<double> std_onestage_db;
};

/// One full pipeline run per σ² with the impairment and noise seeds held
/// fixed. Rows come back sorted by σ².
std::vector<SweepRow> noise_sweep(const Experiment& exp, std::vector<double> sigma2_list);

std::vector<double> default_sweep_sigma2();

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

} // namespace acal
