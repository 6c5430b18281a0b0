#include "acal/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace acal {

std::string to_string(BinMode mode) {
    switch (mode) {
    case BinMode::full:
        return "full";
    case BinMode::experimental:
        return "experimental";
    case BinMode::custom:
        return "custom";
    }
    return "unknown";
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

void Experiment::set_master_seed(std::uint64_t seed) {
    pilot_seed = derive_seed(seed, 0);
    impairment_seed = derive_seed(seed, 1);
    noise.seed = derive_seed(seed, 2);
}

std::vector<std::size_t> Experiment::active_bins() const {
    switch (bin_mode) {
    case BinMode::full: {
        std::vector<std::size_t> bins(fft_size);
        std::iota(bins.begin(), bins.end(), std::size_t{0});
        return bins;
    }
    case BinMode::experimental:
        return experimental_mask(fft_size);
    case BinMode::custom:
        return custom_bins;
    }
    return {};
}

std::vector<std::size_t> Experiment::resolved_eval_bins() const {
    return eval_bins.empty() ? active_bins() : eval_bins;
}

PilotSpec Experiment::pilot_spec() const { return PilotSpec{fft_size, active_bins(), pilot_seed}; }

void Experiment::validate() const {
    geometry.validate();
    if (geometry.channels < 2) {
        throw std::invalid_argument("null forming needs at least two channels");
    }
    if (fft_size < 16) {
        throw std::invalid_argument("fft_size must be at least 16");
    }
    if (repetitions < 1) {
        throw std::invalid_argument("repetitions must be at least 1");
    }
    pilot_spec().validate();
    noise.validate();
    calibration.validate();
    if (calibration.mode == CompensationMode::fir &&
        calibration.delay_taps + calibration.equalizer_taps - 1 > fft_size) {
        throw std::invalid_argument("composed filter is longer than the DFT size");
    }
    const auto active = bin_mask(active_bins(), fft_size);
    for (std::size_t k : resolved_eval_bins()) {
        if (k >= fft_size || !active[k]) {
            throw std::invalid_argument("evaluation bin " + std::to_string(k) + " is not an active pilot bin");
        }
    }
    for (std::size_t k : pattern_bins) {
        if (k >= fft_size || !active[k]) {
            throw std::invalid_argument("beampattern bin " + std::to_string(k) + " is not an active pilot bin");
        }
    }
    if (!(pattern_step_deg > 0.0 && pattern_step_deg <= 10.0)) {
        throw std::invalid_argument("beampattern angle step must lie in (0, 10] degrees");
    }
    if (common_path && common_path->size() != fft_size) {
        throw std::invalid_argument("common path response must have fft_size bins");
    }
    // Surfaces a degenerate θ0/θ1 pair before any simulation work.
    (void)nullform_vector(geometry, theta0_deg, theta1_deg);
}

std::vector<Spectrum> true_responses(const ImpairmentEnsemble& ensemble) {
    std::vector<Spectrum> out;
    out.reserve(ensemble.size());
    for (const auto& imp : ensemble.channels) {
        out.push_back(channel_response(imp, imp.gain.size()));
    }
    return out;
}

std::vector<double> angle_grid(double step_deg) {
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor(180.0 / step_deg + 1e-9));
    for (long i = 0; i <= count; ++i) {
        grid.push_back(-90.0 + static_cast<double>(i) * step_deg);
    }
    if (grid.back() < 90.0 - 1e-9) {
        grid.push_back(90.0);
    }
    return grid;
}

Evaluation evaluate_compensation(const Experiment& exp, const ImpairmentEnsemble& ensemble,
                                 const std::vector<Spectrum>& compensations) {
    const auto eval_bins = exp.resolved_eval_bins();
    std::set<std::size_t> all(eval_bins.begin(), eval_bins.end());
    all.insert(exp.pattern_bins.begin(), exp.pattern_bins.end());
    const std::vector<std::size_t> bins(all.begin(), all.end());

    const auto resp = equalized_response(exp.geometry, true_responses(ensemble), compensations, bins);
    const auto b = nullform_vector(exp.geometry, exp.theta0_deg, exp.theta1_deg);
    Evaluation ev{nulling_ratio(b, resp, exp.theta0_deg, exp.theta1_deg, eval_bins), {}};
    const auto grid = angle_grid(exp.pattern_step_deg);
    for (std::size_t k : exp.pattern_bins) {
        ev.beam_power.push_back(beam_power(b, resp, k, grid));
    }
    return ev;
}

std::vector<Spectrum> compensations_of(const std::vector<ChannelCalibration>& cals) {
    std::vector<Spectrum> out;
    out.reserve(cals.size());
    for (const auto& c : cals) {
        out.push_back(c.compensation);
    }
    return out;
}

ExperimentResult run_experiment_on(const Experiment& exp, CaptureSet captures) {
    exp.validate();
    const ImpairmentEnsemble ensemble =
        sample_ensemble(exp.geometry.channels, exp.fft_size, exp.impairment_seed, exp.profile);
    Pilot pilot = generate_pilot(exp.pilot_spec());
    if (captures.num_channels() != exp.geometry.channels) {
        throw std::invalid_argument("capture has " + std::to_string(captures.num_channels()) +
                                    " channels but the scenario expects " + std::to_string(exp.geometry.channels));
    }
    auto cals = calibrate_array(captures, pilot, exp.calibration);

    ExperimentResult result{std::move(pilot), ensemble, std::move(captures), std::move(cals),
                            angle_grid(exp.pattern_step_deg), {}, {}, std::nullopt};
    result.pre = evaluate_compensation(exp, ensemble, {});
    result.post = evaluate_compensation(exp, ensemble, compensations_of(result.calibrations));
    if (exp.onestage_applicable()) {
        result.onestage =
            evaluate_compensation(exp, ensemble, onestage_compensation(result.captures, result.pilot, exp.calibration));
    }
    return result;
}

ExperimentResult run_experiment(const Experiment& exp) {
    exp.validate();
    const ImpairmentEnsemble ensemble =
        sample_ensemble(exp.geometry.channels, exp.fft_size, exp.impairment_seed, exp.profile);
    CaptureSet captures = simulate_selfcal(exp.pilot_spec(), ensemble, exp.common_path, exp.noise, exp.repetitions);
    return run_experiment_on(exp, std::move(captures));
}

std::vector<double> default_sweep_sigma2() { return {1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2}; }

std::vector<SweepRow> noise_sweep(const Experiment& exp, std::vector<double> sigma2_list) {
    if (sigma2_list.empty()) {
        throw std::invalid_argument("noise sweep needs at least one noise power");
    }
    std::sort(sigma2_list.begin(), sigma2_list.end());
    std::vector<SweepRow> rows;
    for (double s2 : sigma2_list) {
        Experiment point = exp;
        point.noise.sigma2 = s2;
        const auto r = run_experiment(point);
        SweepRow row;
        row.sigma2 = s2;
        row.q_pre_db = r.pre.report.q_avg_db;
        row.q_post_db = r.post.report.q_avg_db;
        row.std_pre_db = r.pre.report.q_std_db;
        row.std_post_db = r.post.report.q_std_db;
        if (r.onestage) {
            row.q_onestage_db = r.onestage->report.q_avg_db;
            row.std_onestage_db = r.onestage->report.q_std_db;
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
            ++j;
        }
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            r[idx[t]] = avg;
        }
        i = j + 1;
    }
    return r;
}

} // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("spearman needs two equal-length samples of size >= 2");
    }
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace acal
