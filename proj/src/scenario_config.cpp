#include "acal/scenario.hpp"

#include "acal/errors.hpp"
#include "acal_presets.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace acal {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"scenario", {"name", "seed"}},
        {"array", {"channels", "spacing"}},
        {"pilot", {"fft_size", "active_bins", "repetitions", "seed"}},
        {"impairments", {"profile", "seed"}},
        {"noise", {"sigma2", "seed"}},
        {"calibration",
         {"mode", "delay_taps", "equalizer_taps", "lambda", "target_gain", "target_gain_db", "kappa_step",
          "equalizer_latency", "search_window"}},
        {"evaluation", {"theta0_deg", "theta1_deg", "bins", "pattern_bins", "pattern_step_deg"}},
        {"sweep", {"sigma2"}},
        {"output", {"dir", "capture_csv"}},
    };
    return s;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void field_error(const std::string& section, const std::string& key, const std::string& msg) {
    throw ConfigError("[" + section + "] " + key + ": " + msg);
}

pt::ptree parse_layer(const std::string& text, const std::string& origin) {
    // The ini parser only knows ';' comments.
    std::istringstream lines(text);
    std::ostringstream cleaned;
    for (std::string line; std::getline(lines, line);) {
        const auto t = trim(line);
        cleaned << (t.rfind('#', 0) == 0 ? std::string{} : line) << '\n';
    }
    std::istringstream in(cleaned.str());
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(origin + ": line " + std::to_string(e.line()) + ": " + e.message());
    }
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            throw ConfigError(origin + ": key '" + section + "' is outside any section");
        }
        const auto it = schema().find(section);
        if (it == schema().end()) {
            throw ConfigError(origin + ": unknown section [" + section + "]");
        }
        for (const auto& [key, value] : body) {
            if (!it->second.contains(key)) {
                throw ConfigError(origin + ": [" + section + "] unknown key '" + key + "'");
            }
        }
    }
    return tree;
}

void merge_layer(pt::ptree& merged, const pt::ptree& layer) {
    if (layer.get_child_optional("scenario.seed")) {
        for (const char* s : {"pilot", "impairments", "noise"}) {
            if (auto sec = merged.get_child_optional(s)) {
                sec->erase("seed");
            }
        }
    }
    const auto cal = layer.get_child_optional("calibration");
    if (cal && (cal->count("target_gain") || cal->count("target_gain_db"))) {
        if (auto sec = merged.get_child_optional("calibration")) {
            sec->erase("target_gain");
            sec->erase("target_gain_db");
        }
    }
    for (const auto& [section, body] : layer) {
        for (const auto& [key, value] : body) {
            merged.put(pt::ptree::path_type(section + "/" + key, '/'), value.data());
        }
    }
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(section + "/" + key, '/'));
        if (!v) {
            return std::nullopt;
        }
        return trim(*v);
    }

    std::string text(const std::string& section, const std::string& key, const std::string& def) const {
        return raw(section, key).value_or(def);
    }

    std::optional<std::uint64_t> uint_opt(const std::string& section, const std::string& key) const {
        const auto v = raw(section, key);
        if (!v) {
            return std::nullopt;
        }
        return to_uint(section, key, *v);
    }

    std::uint64_t uint(const std::string& section, const std::string& key, std::uint64_t def) const {
        return uint_opt(section, key).value_or(def);
    }

    std::optional<double> real_opt(const std::string& section, const std::string& key) const {
        const auto v = raw(section, key);
        if (!v) {
            return std::nullopt;
        }
        return to_real(section, key, *v);
    }

    double real(const std::string& section, const std::string& key, double def) const {
        return real_opt(section, key).value_or(def);
    }

    bool boolean(const std::string& section, const std::string& key, bool def) const {
        const auto v = raw(section, key);
        if (!v) {
            return def;
        }
        if (*v == "true" || *v == "yes" || *v == "1") {
            return true;
        }
        if (*v == "false" || *v == "no" || *v == "0") {
            return false;
        }
        field_error(section, key, "expected true or false, got '" + *v + "'");
    }

    static std::uint64_t to_uint(const std::string& section, const std::string& key, const std::string& v) {
        std::uint64_t out = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (v.empty() || ec != std::errc{} || p != v.data() + v.size()) {
            field_error(section, key, "expected a non-negative integer, got '" + v + "'");
        }
        return out;
    }

    static double to_real(const std::string& section, const std::string& key, const std::string& v) {
        double out = 0.0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (v.empty() || ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out)) {
            field_error(section, key, "expected a finite number, got '" + v + "'");
        }
        return out;
    }

private:
    const pt::ptree& tree_;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        out.push_back(trim(item));
    }
    return out;
}

std::vector<std::size_t> parse_bins(const std::string& section, const std::string& key, const std::string& text,
                                    std::size_t fft_size) {
    std::vector<std::size_t> bins;
    for (const auto& item : split(text, ',')) {
        if (item.empty()) {
            field_error(section, key, "empty entry in bin list '" + text + "'");
        }
        const auto dash = item.find('-');
        std::size_t lo = 0, hi = 0;
        if (dash == std::string::npos) {
            lo = hi = Reader::to_uint(section, key, item);
        } else {
            lo = Reader::to_uint(section, key, trim(item.substr(0, dash)));
            hi = Reader::to_uint(section, key, trim(item.substr(dash + 1)));
            if (hi < lo) {
                field_error(section, key, "descending range '" + item + "'");
            }
        }
        if (hi >= fft_size) {
            field_error(section, key, "bin " + std::to_string(hi) + " is outside 0.." + std::to_string(fft_size - 1));
        }
        for (std::size_t k = lo; k <= hi; ++k) {
            bins.push_back(k);
        }
    }
    std::sort(bins.begin(), bins.end());
    if (std::adjacent_find(bins.begin(), bins.end()) != bins.end()) {
        field_error(section, key, "duplicate bins in '" + text + "'");
    }
    if (bins.empty()) {
        field_error(section, key, "empty bin list");
    }
    return bins;
}

std::string fmt_real(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

template <class Fn>
void check_group(const std::string& section, Fn&& fn) {
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("[" + section + "] " + e.what());
    }
}

ScenarioConfig build(const pt::ptree& tree) {
    const Reader r(tree);
    ScenarioConfig cfg;
    Experiment& exp = cfg.experiment;

    cfg.name = r.text("scenario", "name", "custom");
    if (cfg.name.empty()) {
        field_error("scenario", "name", "must not be empty");
    }
    cfg.seed = r.uint("scenario", "seed", 1);
    cfg.pilot_seed = r.uint_opt("pilot", "seed");
    cfg.impairment_seed = r.uint_opt("impairments", "seed");
    cfg.noise_seed = r.uint_opt("noise", "seed");
    exp.set_master_seed(cfg.seed);
    exp.pilot_seed = cfg.pilot_seed.value_or(exp.pilot_seed);
    exp.impairment_seed = cfg.impairment_seed.value_or(exp.impairment_seed);
    exp.noise.seed = cfg.noise_seed.value_or(exp.noise.seed);

    const auto channels = r.uint("array", "channels", 8);
    if (channels < 2 || channels > 65535) {
        field_error("array", "channels", "must lie in 2..65535, got " + std::to_string(channels));
    }
    exp.geometry.channels = channels;
    exp.geometry.spacing = r.real("array", "spacing", 0.5);
    if (!(exp.geometry.spacing > 0.0)) {
        field_error("array", "spacing", "must be > 0");
    }

    exp.fft_size = r.uint("pilot", "fft_size", 1024);
    if (exp.fft_size < 16 || exp.fft_size > (1u << 24)) {
        field_error("pilot", "fft_size", "must lie in 16..16777216, got " + std::to_string(exp.fft_size));
    }
    const auto reps = r.uint("pilot", "repetitions", 4);
    if (reps < 1 || reps > 4096) {
        field_error("pilot", "repetitions", "must lie in 1..4096, got " + std::to_string(reps));
    }
    exp.repetitions = static_cast<unsigned>(reps);
    const auto active = r.text("pilot", "active_bins", "full");
    if (active == "full") {
        exp.bin_mode = BinMode::full;
    } else if (active == "experimental") {
        exp.bin_mode = BinMode::experimental;
    } else {
        exp.bin_mode = BinMode::custom;
        exp.custom_bins = parse_bins("pilot", "active_bins", active, exp.fft_size);
    }

    const auto profile = r.text("impairments", "profile", "default");
    try {
        exp.profile = parse_impairment_profile(profile);
    } catch (const std::invalid_argument& e) {
        field_error("impairments", "profile", e.what());
    }

    exp.noise.sigma2 = r.real("noise", "sigma2", 1e-6);
    if (exp.noise.sigma2 < 0.0) {
        field_error("noise", "sigma2", "must be >= 0");
    }

    CalibrationConfig& cal = exp.calibration;
    try {
        cal.mode = parse_compensation_mode(r.text("calibration", "mode", "fir"));
    } catch (const std::invalid_argument& e) {
        field_error("calibration", "mode", e.what());
    }
    cal.delay_taps = r.uint("calibration", "delay_taps", 81);
    cal.equalizer_taps = r.uint("calibration", "equalizer_taps", 33);
    cal.lambda = r.real("calibration", "lambda", 1e-3);
    cal.kappa_step = r.real("calibration", "kappa_step", 0.01);
    const auto g_lin = r.real_opt("calibration", "target_gain");
    const auto g_db = r.real_opt("calibration", "target_gain_db");
    if (g_lin && g_db) {
        field_error("calibration", "target_gain_db", "give either target_gain or target_gain_db, not both");
    }
    if (g_db) {
        cfg.target_gain_unit = GainUnit::db;
        cfg.target_gain_value = *g_db;
        cal.target_gain = std::pow(10.0, *g_db / 20.0);
    } else {
        cfg.target_gain_unit = GainUnit::linear;
        cfg.target_gain_value = g_lin.value_or(1.0);
        cal.target_gain = cfg.target_gain_value;
        if (!(cal.target_gain > 0.0)) {
            field_error("calibration", "target_gain", "must be > 0");
        }
    }
    if (const auto lat = r.uint_opt("calibration", "equalizer_latency")) {
        cal.equalizer_latency = static_cast<std::size_t>(*lat);
    }
    if (const auto win = r.raw("calibration", "search_window")) {
        const auto parts = split(*win, ',');
        long lo = 0, hi = 0;
        const bool ok = parts.size() == 2 &&
                        std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), lo).ec == std::errc{} &&
                        std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), hi).ec == std::errc{};
        if (!ok) {
            field_error("calibration", "search_window", "expected 'first,last' signed lags, got '" + *win + "'");
        }
        const long n = static_cast<long>(exp.fft_size);
        if (!(lo < hi && lo > -n && hi <= n && hi - lo <= n)) {
            field_error("calibration", "search_window", "need first < last spanning at most fft_size lags");
        }
        cal.search_window = LagWindow{lo, hi};
    }
    check_group("calibration", [&] { cal.validate(); });
    if (cal.mode == CompensationMode::fir && cal.delay_taps + cal.equalizer_taps - 1 > exp.fft_size) {
        field_error("calibration", "delay_taps", "delay_taps + equalizer_taps - 1 exceeds fft_size");
    }
    check_group("pilot", [&] { exp.pilot_spec().validate(); });

    const auto active_bins = exp.active_bins();
    const auto is_active = bin_mask(active_bins, exp.fft_size);
    exp.theta0_deg = r.real("evaluation", "theta0_deg", 25.0);
    exp.theta1_deg = r.real("evaluation", "theta1_deg", 0.0);
    for (const auto& [key, v] : {std::pair{"theta0_deg", exp.theta0_deg}, std::pair{"theta1_deg", exp.theta1_deg}}) {
        if (v < -90.0 || v > 90.0) {
            field_error("evaluation", key, "must lie in [-90, 90]");
        }
    }
    const auto eval = r.text("evaluation", "bins", "active");
    if (eval != "active") {
        exp.eval_bins = parse_bins("evaluation", "bins", eval, exp.fft_size);
        for (std::size_t k : exp.eval_bins) {
            if (!is_active[k]) {
                field_error("evaluation", "bins", "bin " + std::to_string(k) + " is not an active pilot bin");
            }
        }
    }
    if (const auto pb = r.raw("evaluation", "pattern_bins")) {
        exp.pattern_bins.clear();
        if (*pb != "none") {
            exp.pattern_bins = parse_bins("evaluation", "pattern_bins", *pb, exp.fft_size);
            for (std::size_t k : exp.pattern_bins) {
                if (!is_active[k]) {
                    field_error("evaluation", "pattern_bins", "bin " + std::to_string(k) + " is not an active pilot bin");
                }
            }
        }
    } else {
        std::erase_if(exp.pattern_bins, [&](std::size_t k) { return k >= exp.fft_size || !is_active[k]; });
    }
    exp.pattern_step_deg = r.real("evaluation", "pattern_step_deg", 0.5);
    if (!(exp.pattern_step_deg > 0.0 && exp.pattern_step_deg <= 10.0)) {
        field_error("evaluation", "pattern_step_deg", "must lie in (0, 10]");
    }

    if (const auto sw = r.raw("sweep", "sigma2")) {
        cfg.sweep_sigma2.clear();
        for (const auto& item : split(*sw, ',')) {
            const double v = Reader::to_real("sweep", "sigma2", item);
            if (v < 0.0) {
                field_error("sweep", "sigma2", "noise powers must be >= 0");
            }
            cfg.sweep_sigma2.push_back(v);
        }
        if (cfg.sweep_sigma2.empty()) {
            field_error("sweep", "sigma2", "empty list");
        }
    }

    cfg.output_dir = r.text("output", "dir", "runs/" + cfg.name);
    if (cfg.output_dir.empty()) {
        field_error("output", "dir", "must not be empty");
    }
    cfg.capture_csv = r.boolean("output", "capture_csv", false);

    try {
        exp.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    return cfg;
}

} // namespace

ConfigOverride parse_override(const std::string& text) {
    const auto eq = text.find('=');
    const auto dot = text.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
        throw ConfigError("override '" + text + "' is not of the form section.key=value");
    }
    return ConfigOverride{trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : presets::kAll) {
        out.emplace_back(p.name);
    }
    return out;
}

std::string preset_text(const std::string& name) {
    for (const auto& p : presets::kAll) {
        if (name == p.name) {
            return std::string(p.text);
        }
    }
    std::string known;
    for (const auto& n : preset_names()) {
        known += (known.empty() ? "" : ", ") + n;
    }
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

ScenarioConfig load_config(const std::optional<std::string>& preset, const std::optional<std::string>& file_text,
                           const std::vector<ConfigOverride>& overrides) {
    pt::ptree merged;
    if (preset) {
        merge_layer(merged, parse_layer(preset_text(*preset), "preset '" + *preset + "'"));
    }
    if (file_text) {
        merge_layer(merged, parse_layer(*file_text, "config file"));
    }
    for (const auto& o : overrides) {
        const auto dot = o.key.find('.');
        if (dot == std::string::npos) {
            throw ConfigError("override key '" + o.key + "' must be section.key");
        }
        const std::string text = "[" + o.key.substr(0, dot) + "]\n" + o.key.substr(dot + 1) + " = " + o.value + "\n";
        merge_layer(merged, parse_layer(text, "override '" + o.key + "'"));
    }
    return build(merged);
}

ScenarioConfig parse_config(const std::string& text) { return load_config(std::nullopt, text); }

std::string format_bins(const std::vector<std::size_t>& bins) {
    std::string out;
    for (std::size_t i = 0; i < bins.size();) {
        std::size_t j = i;
        while (j + 1 < bins.size() && bins[j + 1] == bins[j] + 1) {
            ++j;
        }
        if (!out.empty()) {
            out += ',';
        }
        out += std::to_string(bins[i]);
        if (j > i) {
            out += '-' + std::to_string(bins[j]);
        }
        i = j + 1;
    }
    return out;
}

std::string to_ini(const ScenarioConfig& cfg) {
    const Experiment& exp = cfg.experiment;
    const CalibrationConfig& cal = exp.calibration;
    std::ostringstream o;
    o << "[scenario]\nname = " << cfg.name << "\nseed = " << cfg.seed << "\n\n";
    o << "[array]\nchannels = " << exp.geometry.channels << "\nspacing = " << fmt_real(exp.geometry.spacing) << "\n\n";
    o << "[pilot]\nfft_size = " << exp.fft_size << "\nactive_bins = ";
    switch (exp.bin_mode) {
    case BinMode::full:
        o << "full";
        break;
    case BinMode::experimental:
        o << "experimental";
        break;
    case BinMode::custom:
        o << format_bins(exp.custom_bins);
        break;
    }
    o << "\nrepetitions = " << exp.repetitions << "\n";
    if (cfg.pilot_seed) {
        o << "seed = " << *cfg.pilot_seed << "\n";
    }
    o << "\n[impairments]\nprofile = " << to_string(exp.profile) << "\n";
    if (cfg.impairment_seed) {
        o << "seed = " << *cfg.impairment_seed << "\n";
    }
    o << "\n[noise]\nsigma2 = " << fmt_real(exp.noise.sigma2) << "\n";
    if (cfg.noise_seed) {
        o << "seed = " << *cfg.noise_seed << "\n";
    }
    o << "\n[calibration]\nmode = " << to_string(cal.mode) << "\ndelay_taps = " << cal.delay_taps
      << "\nequalizer_taps = " << cal.equalizer_taps << "\nlambda = " << fmt_real(cal.lambda) << "\n"
      << (cfg.target_gain_unit == GainUnit::db ? "target_gain_db = " : "target_gain = ")
      << fmt_real(cfg.target_gain_value) << "\nkappa_step = " << fmt_real(cal.kappa_step) << "\n";
    if (cal.equalizer_latency) {
        o << "equalizer_latency = " << *cal.equalizer_latency << "\n";
    }
    if (cal.search_window) {
        o << "search_window = " << cal.search_window->first << "," << cal.search_window->last << "\n";
    }
    o << "\n[evaluation]\ntheta0_deg = " << fmt_real(exp.theta0_deg) << "\ntheta1_deg = " << fmt_real(exp.theta1_deg)
      << "\nbins = " << (exp.eval_bins.empty() ? "active" : format_bins(exp.eval_bins))
      << "\npattern_bins = " << (exp.pattern_bins.empty() ? "none" : format_bins(exp.pattern_bins))
      << "\npattern_step_deg = " << fmt_real(exp.pattern_step_deg) << "\n\n";
    o << "[sweep]\nsigma2 = ";
    for (std::size_t i = 0; i < cfg.sweep_sigma2.size(); ++i) {
        o << (i ? "," : "") << fmt_real(cfg.sweep_sigma2[i]);
    }
    o << "\n\n[output]\ndir = " << cfg.output_dir.string() << "\ncapture_csv = " << (cfg.capture_csv ? "true" : "false")
      << "\n";
    return o.str();
}

} // namespace acal
