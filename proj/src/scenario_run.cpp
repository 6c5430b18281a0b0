#include "acal/scenario.hpp"

#include "acal/errors.hpp"
#include "acal/io_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

namespace acal {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

/// Human-readable progress log, persisted as run.log.
class RunLog {
public:
    void line(const std::string& stage, const std::string& msg) {
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        char stamp[32];
        std::snprintf(stamp, sizeof stamp, "[%8.3fs] ", t);
        text_ += stamp + stage + ": " + msg + "\n";
    }

    const std::string& text() const { return text_; }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
    std::string text_;
};

const std::vector<std::string>& artifact_names() {
    static const std::vector<std::string> names{
        "config.ini",          "ensemble.json",          "pilot.iq",
        "capture.iq",          "capture.csv",            "estimates.csv",
        "filters.json",        "nulling_ratio.csv",      "beampattern_pre.csv",
        "beampattern_post.csv", "beampattern_onestage.csv", "summary.json",
        "sweep.csv",           "run.log"};
    return names;
}

/// Creates the run directory, clears artifacts of earlier runs and holds the
/// INCOMPLETE marker until finish() is called.
class RunDirectory {
public:
    explicit RunDirectory(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) {
            throw DataError("cannot create output directory '" + dir_.string() + "': " + ec.message());
        }
        write_text_atomic(dir_ / kIncompleteMarker, "run in progress\n");
        for (const auto& name : artifact_names()) {
            fs::remove(dir_ / name, ec);
        }
    }

    const fs::path& path() const { return dir_; }
    fs::path operator/(const std::string& name) const { return dir_ / name; }

    void fail(const RunLog& log, const std::string& stage, const std::string& what) {
        write_text_atomic(dir_ / kIncompleteMarker, "failed in stage '" + stage + "': " + what + "\n");
        write_text_atomic(dir_ / "run.log", log.text());
    }

    void finish(const RunLog& log) {
        write_text_atomic(dir_ / "run.log", log.text());
        fs::remove(dir_ / kIncompleteMarker);
    }

private:
    fs::path dir_;
};

/// Runs fn with stage bookkeeping; on failure logs, flags the run directory
/// and rethrows with the stage name attached.
template <class Fn>
void staged(RunDirectory& dir, RunLog& log, Fn&& fn) {
    std::string stage = "setup";
    try {
        fn(stage);
    } catch (const std::exception& e) {
        log.line(stage, std::string("FAILED: ") + e.what());
        dir.fail(log, stage, e.what());
        rethrow_with_context("stage '" + stage + "': ");
    }
}

json report_json(const NullformReport& r) {
    return json{{"q_avg_db", r.q_avg_db}, {"q_std_db", r.q_std_db}};
}

std::string summary_json(const ScenarioConfig& cfg, const ExperimentResult& res) {
    const Experiment& exp = cfg.experiment;
    json doc{{"scenario", cfg.name},
             {"seed", cfg.seed},
             {"channels", exp.geometry.channels},
             {"fft_size", exp.fft_size},
             {"active_bins", exp.active_bins().size()},
             {"mode", to_string(exp.calibration.mode)},
             {"sigma2", exp.noise.sigma2},
             {"repetitions", exp.repetitions},
             {"theta0_deg", exp.theta0_deg},
             {"theta1_deg", exp.theta1_deg},
             {"bins_evaluated", res.pre.report.bins.size()},
             {"q_orientation", "null-direction power over desired-direction power; more negative is better"},
             {"pre", report_json(res.pre.report)},
             {"post", report_json(res.post.report)},
             {"onestage", res.onestage ? report_json(res.onestage->report) : json(nullptr)}};
    json latency = nullptr;
    if (!res.calibrations.empty() && res.calibrations.front().filter) {
        latency = res.calibrations.front().filter->latency;
    }
    doc["latency_samples"] = latency;
    json est = json::array();
    for (const auto& c : res.calibrations) {
        const auto& truth = res.ensemble.channels[c.channel];
        est.push_back(json{{"channel", c.channel},
                           {"tau_hat", c.estimate.tau},
                           {"phi_hat", c.estimate.phi},
                           {"tau_true", truth.tau},
                           {"phi_true", truth.phi}});
    }
    doc["estimates"] = std::move(est);
    return doc.dump(1) + "\n";
}

std::string evaluation_summary_json(const ScenarioConfig& cfg, const EvaluationOutcome& out) {
    const Experiment& exp = cfg.experiment;
    json doc{{"scenario", cfg.name},
             {"channels", exp.geometry.channels},
             {"fft_size", exp.fft_size},
             {"theta0_deg", exp.theta0_deg},
             {"theta1_deg", exp.theta1_deg},
             {"bins_evaluated", out.pre.report.bins.size()},
             {"q_orientation", "null-direction power over desired-direction power; more negative is better"},
             {"pre", report_json(out.pre.report)},
             {"post", out.post ? report_json(out.post->report) : json(nullptr)}};
    return doc.dump(1) + "\n";
}

std::string report_line(const std::string& label, const NullformReport& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s Q_avg = %.2f dB, std = %.2f dB over %zu bins", label.c_str(), r.q_avg_db,
                  r.q_std_db, r.bins.size());
    return buf;
}

void write_evaluations(const RunDirectory& dir, const Experiment& exp, const std::vector<double>& grid,
                       const std::vector<std::pair<std::string, const Evaluation*>>& evals) {
    std::vector<std::string> labels;
    std::vector<const NullformReport*> reports;
    for (const auto& [label, ev] : evals) {
        labels.push_back(label);
        reports.push_back(&ev->report);
        write_text_atomic(dir / ("beampattern_" + label + ".csv"), beampattern_csv(grid, exp.pattern_bins, ev->beam_power));
    }
    write_text_atomic(dir / "nulling_ratio.csv", nulling_ratio_csv(evals.front().second->report.bins, labels, reports));
}

void check_capture_shape(const CaptureSet& captures, const Experiment& exp, const fs::path& path) {
    if (captures.num_channels() != exp.geometry.channels) {
        throw DataError("capture '" + path.string() + "' has " + std::to_string(captures.num_channels()) +
                        " channels but the scenario expects " + std::to_string(exp.geometry.channels));
    }
    if (captures.length() % exp.fft_size != 0) {
        throw DataError("capture '" + path.string() + "' length " + std::to_string(captures.length()) +
                        " is not a whole number of " + std::to_string(exp.fft_size) + "-sample pilot frames");
    }
}

} // namespace

std::string nulling_ratio_csv(const std::vector<std::size_t>& bins, const std::vector<std::string>& labels,
                              const std::vector<const NullformReport*>& reports) {
    std::ostringstream o;
    o << "bin";
    for (const auto& l : labels) {
        o << ",q_" << l << "_linear,q_" << l << "_db";
    }
    o << "\n";
    for (std::size_t i = 0; i < bins.size(); ++i) {
        o << bins[i];
        for (const auto* r : reports) {
            o << "," << num(r->q_linear[i]) << "," << num(r->q_db[i]);
        }
        o << "\n";
    }
    return o.str();
}

std::string beampattern_csv(const std::vector<double>& theta_deg, const std::vector<std::size_t>& bins,
                            const std::vector<std::vector<double>>& beam_power) {
    std::ostringstream o;
    o << "theta_deg";
    for (std::size_t k : bins) {
        o << ",k" << k << "_db";
    }
    for (std::size_t k : bins) {
        o << ",k" << k << "_raw_db";
    }
    o << "\n";
    std::vector<double> peak;
    for (const auto& p : beam_power) {
        peak.push_back(*std::max_element(p.begin(), p.end()));
    }
    for (std::size_t a = 0; a < theta_deg.size(); ++a) {
        o << num(theta_deg[a]);
        for (std::size_t i = 0; i < bins.size(); ++i) {
            o << "," << num(power_db(peak[i] > 0.0 ? beam_power[i][a] / peak[i] : 0.0));
        }
        for (std::size_t i = 0; i < bins.size(); ++i) {
            o << "," << num(power_db(beam_power[i][a]));
        }
        o << "\n";
    }
    return o.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream o;
    o << "sigma2,q_pre_db,q_post_db,q_onestage_db,std_pre_db,std_post_db,std_onestage_db\n";
    const auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string{}; };
    for (const auto& r : rows) {
        o << num(r.sigma2) << "," << num(r.q_pre_db) << "," << num(r.q_post_db) << "," << opt(r.q_onestage_db) << ","
          << num(r.std_pre_db) << "," << num(r.std_post_db) << "," << opt(r.std_onestage_db) << "\n";
    }
    return o.str();
}

std::string estimates_csv(const std::vector<ChannelCalibration>& cals, const ImpairmentEnsemble* truth) {
    std::ostringstream o;
    o << "channel,ell,eps,tau_hat,phi_hat,peak_magnitude";
    if (truth) {
        o << ",tau_true,phi_true";
    }
    o << "\n";
    for (const auto& c : cals) {
        const auto& e = c.estimate;
        o << c.channel << "," << e.ell << "," << num(e.eps) << "," << num(e.tau) << "," << num(e.phi) << ","
          << num(e.peak_magnitude);
        if (truth) {
            o << "," << num(truth->channels[c.channel].tau) << "," << num(truth->channels[c.channel].phi);
        }
        o << "\n";
    }
    return o.str();
}

RunOutcome run_scenario(const ScenarioConfig& cfg) {
    const Experiment& exp = cfg.experiment;
    RunDirectory dir(cfg.output_dir);
    RunLog log;
    std::optional<ExperimentResult> result;

    staged(dir, log, [&](std::string& stage) {
        exp.validate();
        write_text_atomic(dir / "config.ini", to_ini(cfg));
        log.line(stage, "scenario '" + cfg.name + "', seed " + std::to_string(cfg.seed) + ", " +
                            std::to_string(exp.geometry.channels) + " channels, N = " + std::to_string(exp.fft_size));

        stage = "simulate";
        ImpairmentEnsemble ensemble =
            sample_ensemble(exp.geometry.channels, exp.fft_size, exp.impairment_seed, exp.profile);
        write_ensemble(ensemble, dir / "ensemble.json");
        Pilot pilot = generate_pilot(exp.pilot_spec());
        CaptureSet captures = simulate_selfcal(pilot.spec, ensemble, exp.common_path, exp.noise, exp.repetitions);
        write_capture(captures, dir / "capture.iq");
        if (cfg.capture_csv) {
            write_capture_csv(captures, dir / "capture.csv");
        }
        log.line(stage, std::to_string(exp.repetitions) + " pilot frames per channel, sigma2 = " + short_num(exp.noise.sigma2));

        stage = "calibrate";
        auto cals = calibrate_array(captures, pilot, exp.calibration);
        write_text_atomic(dir / "estimates.csv", estimates_csv(cals, &ensemble));
        write_filter_export(make_filter_export(exp.calibration, pilot.spec, cals), dir / "filters.json");
        log.line(stage, to_string(exp.calibration.mode) + " compensation designed for " + std::to_string(cals.size()) +
                            " channels");

        stage = "evaluate";
        ExperimentResult res{std::move(pilot), std::move(ensemble), std::move(captures), std::move(cals),
                             angle_grid(exp.pattern_step_deg), {}, {}, std::nullopt};
        res.pre = evaluate_compensation(exp, res.ensemble, {});
        res.post = evaluate_compensation(exp, res.ensemble, compensations_of(res.calibrations));
        std::vector<std::pair<std::string, const Evaluation*>> evals{{"pre", &res.pre}, {"post", &res.post}};
        if (exp.onestage_applicable()) {
            res.onestage = evaluate_compensation(
                exp, res.ensemble, onestage_compensation(res.captures, res.pilot, exp.calibration));
            evals.emplace_back("onestage", &*res.onestage);
        }
        write_evaluations(dir, exp, res.theta_grid_deg, evals);
        write_text_atomic(dir / "summary.json", summary_json(cfg, res));
        for (const auto& [label, ev] : evals) {
            log.line(stage, report_line(label, ev->report));
        }
        result = std::move(res);
    });
    dir.finish(log);
    return RunOutcome{dir.path(), std::move(*result)};
}

std::vector<SweepRow> run_noise_sweep(const ScenarioConfig& cfg, const std::vector<double>& sigma2_list) {
    RunDirectory dir(cfg.output_dir);
    RunLog log;
    std::vector<SweepRow> rows;
    staged(dir, log, [&](std::string& stage) {
        write_text_atomic(dir / "config.ini", to_ini(cfg));
        stage = "sweep";
        rows = noise_sweep(cfg.experiment, sigma2_list);
        write_text_atomic(dir / "sweep.csv", sweep_csv(rows));
        for (const auto& r : rows) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "sigma2 = %g: pre %.2f dB, post %.2f dB", r.sigma2, r.q_pre_db, r.q_post_db);
            log.line(stage, buf);
        }
    });
    dir.finish(log);
    return rows;
}

FileCalibration calibrate_from_file(const fs::path& capture_path, const ScenarioConfig& cfg) {
    const Experiment& exp = cfg.experiment;
    RunDirectory dir(cfg.output_dir);
    RunLog log;
    std::optional<FileCalibration> out;
    staged(dir, log, [&](std::string& stage) {
        write_text_atomic(dir / "config.ini", to_ini(cfg));
        stage = "read";
        CaptureSet captures = read_capture(capture_path);
        check_capture_shape(captures, exp, capture_path);
        log.line(stage, capture_path.string() + ": " + std::to_string(captures.num_channels()) + " channels of " +
                            std::to_string(captures.length()) + " samples");

        stage = "calibrate";
        Pilot pilot = generate_pilot(exp.pilot_spec());
        auto cals = calibrate_array(captures, pilot, exp.calibration);
        FilterExport fx = make_filter_export(exp.calibration, pilot.spec, cals);
        write_text_atomic(dir / "estimates.csv", estimates_csv(cals, nullptr));
        write_filter_export(fx, dir / "filters.json");
        log.line(stage, to_string(exp.calibration.mode) + " compensation designed for " + std::to_string(cals.size()) +
                            " channels");
        out = FileCalibration{std::move(pilot), std::move(captures), std::move(cals), std::move(fx)};
    });
    dir.finish(log);
    return std::move(*out);
}

CaptureSet simulate_to_dir(const ScenarioConfig& cfg) {
    const Experiment& exp = cfg.experiment;
    RunDirectory dir(cfg.output_dir);
    RunLog log;
    std::optional<CaptureSet> out;
    staged(dir, log, [&](std::string& stage) {
        exp.validate();
        write_text_atomic(dir / "config.ini", to_ini(cfg));
        stage = "simulate";
        const auto ensemble = sample_ensemble(exp.geometry.channels, exp.fft_size, exp.impairment_seed, exp.profile);
        write_ensemble(ensemble, dir / "ensemble.json");
        const Pilot pilot = generate_pilot(exp.pilot_spec());
        write_capture(CaptureSet{{pilot.waveform}, 0.0, CaptureOrigin::simulated, exp.pilot_seed}, dir / "pilot.iq");
        CaptureSet captures = simulate_selfcal(pilot.spec, ensemble, exp.common_path, exp.noise, exp.repetitions);
        write_capture(captures, dir / "capture.iq");
        if (cfg.capture_csv) {
            write_capture_csv(captures, dir / "capture.csv");
        }
        log.line(stage, std::to_string(captures.num_channels()) + " channels of " +
                            std::to_string(captures.length()) + " samples written");
        out = std::move(captures);
    });
    dir.finish(log);
    return std::move(*out);
}

EvaluationOutcome evaluate_to_dir(const ScenarioConfig& cfg, const ImpairmentEnsemble& ensemble,
                                  const std::optional<FilterExport>& filters) {
    const Experiment& exp = cfg.experiment;
    RunDirectory dir(cfg.output_dir);
    RunLog log;
    std::optional<EvaluationOutcome> out;
    staged(dir, log, [&](std::string& stage) {
        write_text_atomic(dir / "config.ini", to_ini(cfg));
        stage = "evaluate";
        if (ensemble.size() != exp.geometry.channels || ensemble.fft_size() != exp.fft_size) {
            throw DataError("ensemble has " + std::to_string(ensemble.size()) + " channels of " +
                            std::to_string(ensemble.fft_size()) + " bins; the scenario expects " +
                            std::to_string(exp.geometry.channels) + " of " + std::to_string(exp.fft_size));
        }
        if (filters && (filters->channels.size() != exp.geometry.channels || filters->fft_size != exp.fft_size)) {
            throw DataError("filter export has " + std::to_string(filters->channels.size()) + " channels of " +
                            std::to_string(filters->fft_size) + " bins; the scenario expects " +
                            std::to_string(exp.geometry.channels) + " of " + std::to_string(exp.fft_size));
        }
        EvaluationOutcome res{evaluate_compensation(exp, ensemble, {}), std::nullopt};
        std::vector<std::pair<std::string, const Evaluation*>> evals{{"pre", &res.pre}};
        log.line(stage, report_line("pre", res.pre.report));
        if (filters) {
            res.post = evaluate_compensation(exp, ensemble, filters->compensations());
            evals.emplace_back("post", &*res.post);
            log.line(stage, report_line("post", res.post->report));
        }
        write_evaluations(dir, exp, angle_grid(exp.pattern_step_deg), evals);
        write_text_atomic(dir / "summary.json", evaluation_summary_json(cfg, res));
        out = std::move(res);
    });
    dir.finish(log);
    return std::move(*out);
}

} // namespace acal
