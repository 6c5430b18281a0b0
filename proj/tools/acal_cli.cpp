#include "acal/acceptance.hpp"
#include "acal/errors.hpp"
#include "acal/io_util.hpp"
#include "acal/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>

namespace {

enum ExitCode : int {
    kOk = 0,
    kOther = 1,
    kConfig = 2,
    kData = 3,
    kNumerical = 4,
    kAcceptance = 5,
};

/// Flags shared by every scenario verb; each maps onto one config key.
struct ScenarioFlags {
    std::string preset;
    std::string config_path;
    std::vector<std::string> sets;
    std::map<std::string, std::string> mirrors;

    void attach(CLI::App& app) {
        app.add_option("--preset", preset, "Built-in scenario (paper-sim, paper-experiment, ideal)");
        app.add_option("--config", config_path, "Scenario INI file, layered over --preset")->check(CLI::ExistingFile);
        app.add_option("--set", sets, "Override any config key: section.key=value")->take_all();
        mirror(app, "--seed", "scenario.seed", "Master seed");
        mirror(app, "--out-dir", "output.dir", "Output directory");
        mirror(app, "--channels", "array.channels", "Number of array channels M");
        mirror(app, "--spacing", "array.spacing", "Element spacing in wavelengths");
        mirror(app, "--fft-size", "pilot.fft_size", "DFT size N");
        mirror(app, "--active-bins", "pilot.active_bins", "full | experimental | bin list");
        mirror(app, "--repetitions", "pilot.repetitions", "Pilot frames averaged per channel");
        mirror(app, "--pilot-seed", "pilot.seed", "Pilot seed override");
        mirror(app, "--profile", "impairments.profile", "Impairment profile: none | default");
        mirror(app, "--impairment-seed", "impairments.seed", "Impairment seed override");
        mirror(app, "--sigma2", "noise.sigma2", "Per-sample noise power");
        mirror(app, "--noise-seed", "noise.seed", "Noise seed override");
        mirror(app, "--mode", "calibration.mode", "Compensation mode: fir | direct");
        mirror(app, "--delay-taps", "calibration.delay_taps", "Fractional-delay filter length L_d");
        mirror(app, "--equalizer-taps", "calibration.equalizer_taps", "Equalizer length L_q");
        mirror(app, "--lambda", "calibration.lambda", "Equalizer regularization");
        mirror(app, "--target-gain", "calibration.target_gain", "Target gain G0 (linear)");
        mirror(app, "--target-gain-db", "calibration.target_gain_db", "Target gain G0 in dB");
        mirror(app, "--kappa-step", "calibration.kappa_step", "Fractional-shift search step");
        mirror(app, "--theta0-deg", "evaluation.theta0_deg", "Desired direction");
        mirror(app, "--theta1-deg", "evaluation.theta1_deg", "Null direction");
        mirror(app, "--eval-bins", "evaluation.bins", "active | bin list");
        mirror(app, "--pattern-bins", "evaluation.pattern_bins", "none | bin list");
        mirror(app, "--capture-csv", "output.capture_csv", "Also write capture.csv (true|false)");
    }

    acal::ScenarioConfig load() const {
        std::optional<std::string> p;
        std::optional<std::string> text;
        if (!config_path.empty()) {
            text = acal::read_text_file(config_path);
        }
        if (!preset.empty()) {
            p = preset;
        } else if (!text) {
            p = "paper-sim";
        }
        if (!mirrors.at("calibration.target_gain").empty() && !mirrors.at("calibration.target_gain_db").empty()) {
            throw acal::ConfigError("give either --target-gain or --target-gain-db, not both");
        }
        // The master seed goes first so explicit per-stream seeds survive it.
        std::vector<acal::ConfigOverride> overrides;
        if (const auto& seed = mirrors.at("scenario.seed"); !seed.empty()) {
            overrides.push_back({"scenario.seed", seed});
        }
        for (const auto& [key, value] : mirrors) {
            if (!value.empty() && key != "scenario.seed") {
                overrides.push_back({key, value});
            }
        }
        for (const auto& s : sets) {
            overrides.push_back(acal::parse_override(s));
        }
        return acal::load_config(p, text, overrides);
    }

private:
    void mirror(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
        app.add_option(flag, mirrors[key], help + " [" + key + "]");
    }
};

void print_report(const std::string& label, const acal::NullformReport& r) {
    std::printf("%-9s Q_avg %9.3f dB   std %9.3f dB   (%zu bins)\n", label.c_str(), r.q_avg_db, r.q_std_db,
                r.bins.size());
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    for (char c : text + ",") {
        if (c == ',') {
            if (!item.empty()) {
                out.push_back(item);
            }
            item.clear();
        } else if (c != ' ') {
            item += c;
        }
    }
    return out;
}

int run_check(const std::string& criteria, const std::string& seeds) {
    acal::acceptance::Options opts;
    for (const auto& c : split_list(criteria)) {
        opts.only.push_back(std::stoi(c));
    }
    if (!seeds.empty()) {
        opts.seeds.clear();
        for (const auto& s : split_list(seeds)) {
            opts.seeds.push_back(std::stoull(s));
        }
    }
    opts.on_result = [](const acal::acceptance::CriterionResult& r) {
        std::printf("%s\n", acal::acceptance::format(r).c_str());
        std::fflush(stdout);
    };
    const auto results = acal::acceptance::run(opts);
    const bool ok = acal::acceptance::all_passed(results);
    std::size_t passed = 0;
    for (const auto& r : results) {
        passed += r.passed ? 1 : 0;
    }
    std::printf("%zu/%zu criteria passed\n", passed, results.size());
    return ok ? kOk : kAcceptance;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Array self-calibration toolkit: simulate, calibrate and evaluate null forming"};
    app.require_subcommand(1);

    ScenarioFlags run_flags, sim_flags, cal_flags, eval_flags, sweep_flags, cfg_flags;

    auto* run = app.add_subcommand("run", "Simulate, calibrate and evaluate one scenario");
    run_flags.attach(*run);

    auto* simulate = app.add_subcommand("simulate", "Write ground truth, pilot and self-calibration capture");
    sim_flags.attach(*simulate);

    std::string capture_path;
    auto* calibrate = app.add_subcommand("calibrate", "Calibrate an IQ capture file");
    cal_flags.attach(*calibrate);
    calibrate->add_option("--capture", capture_path, "Capture file")->required()->check(CLI::ExistingFile);

    std::string ensemble_path, filters_path;
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate null forming for a filter export");
    eval_flags.attach(*evaluate);
    evaluate->add_option("--ensemble", ensemble_path, "Ground-truth ensemble JSON")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--filters", filters_path, "Filter export JSON (omit for uncalibrated only)")
        ->check(CLI::ExistingFile);

    std::string sigma2_list;
    auto* sweep = app.add_subcommand("sweep", "Noise-power sweep");
    sweep_flags.attach(*sweep);
    sweep->add_option("--sigma2-list", sigma2_list, "Comma-separated noise powers [sweep.sigma2]");

    std::string criteria, check_seeds;
    auto* check = app.add_subcommand("check", "Run the acceptance suite");
    check->add_option("--criteria", criteria, "Comma-separated criterion numbers (default: all)");
    check->add_option("--seeds", check_seeds, "Comma-separated master seeds (default: 1..10)");

    auto* config = app.add_subcommand("config", "Print the resolved scenario configuration");
    cfg_flags.attach(*config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run) {
            const auto cfg = run_flags.load();
            const auto out = acal::run_scenario(cfg);
            std::printf("run directory: %s\n", out.dir.string().c_str());
            print_report("pre", out.result.pre.report);
            print_report("post", out.result.post.report);
            if (out.result.onestage) {
                print_report("one-stage", out.result.onestage->report);
            }
        } else if (*simulate) {
            const auto cfg = sim_flags.load();
            const auto captures = acal::simulate_to_dir(cfg);
            std::printf("wrote %zu channels x %zu samples to %s\n", captures.num_channels(), captures.length(),
                        cfg.output_dir.string().c_str());
        } else if (*calibrate) {
            const auto cfg = cal_flags.load();
            const auto out = acal::calibrate_from_file(capture_path, cfg);
            std::printf("channel        tau          phi\n");
            for (const auto& c : out.calibrations) {
                std::printf("%7zu %12.6f %12.6f\n", c.channel, c.estimate.tau, c.estimate.phi);
            }
            std::printf("filters written to %s\n", (cfg.output_dir / "filters.json").string().c_str());
        } else if (*evaluate) {
            const auto cfg = eval_flags.load();
            const auto ensemble = acal::read_ensemble(ensemble_path);
            std::optional<acal::FilterExport> filters;
            if (!filters_path.empty()) {
                filters = acal::read_filter_export(filters_path);
            }
            const auto out = acal::evaluate_to_dir(cfg, ensemble, filters);
            print_report("pre", out.pre.report);
            if (out.post) {
                print_report("post", out.post->report);
            }
        } else if (*sweep) {
            if (!sigma2_list.empty()) {
                sweep_flags.sets.push_back("sweep.sigma2=" + sigma2_list);
            }
            const auto cfg = sweep_flags.load();
            const auto rows = acal::run_noise_sweep(cfg, cfg.sweep_sigma2);
            std::printf("%10s %12s %12s %12s\n", "sigma2", "Q_pre_dB", "Q_post_dB", "Q_1stage_dB");
            for (const auto& r : rows) {
                std::printf("%10.1e %12.3f %12.3f %12s\n", r.sigma2, r.q_pre_db, r.q_post_db,
                            r.q_onestage_db ? std::to_string(*r.q_onestage_db).c_str() : "-");
            }
            std::printf("sweep written to %s\n", (cfg.output_dir / "sweep.csv").string().c_str());
        } else if (*check) {
            return run_check(criteria, check_seeds);
        } else if (*config) {
            std::cout << acal::to_ini(cfg_flags.load());
        }
    } catch (const acal::ConfigError& e) {
        std::fprintf(stderr, "acal: configuration error: %s\n", e.what());
        return kConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "acal: invalid argument: %s\n", e.what());
        return kConfig;
    } catch (const acal::DataError& e) {
        std::fprintf(stderr, "acal: data error: %s\n", e.what());
        return kData;
    } catch (const acal::NumericalError& e) {
        std::fprintf(stderr, "acal: numerical failure: %s\n", e.what());
        return kNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acal: error: %s\n", e.what());
        return kOther;
    }
    return kOk;
}
