#include "acal/serialization.hpp"

#include "acal/errors.hpp"
#include "acal/io_util.hpp"

#include <json.hpp>

#include <cmath>

namespace acal {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json complex_pairs(std::span<const cplx> values) {
    json out = json::array();
    for (const cplx& v : values) {
        out.push_back(json::array({v.real(), v.imag()}));
    }
    return out;
}

std::vector<cplx> read_pairs(const json& arr, const std::string& what) {
    if (!arr.is_array()) {
        throw DataError(what + ": expected an array of [re, im] pairs");
    }
    std::vector<cplx> out;
    out.reserve(arr.size());
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            throw DataError(what + ": expected an array of [re, im] pairs");
        }
        out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return out;
}

void check_header(const json& doc, const std::string& format) {
    if (!doc.is_object() || doc.value("format", std::string{}) != format) {
        throw DataError("not an " + format + " document");
    }
    if (doc.value("version", 0) != kFormatVersion) {
        throw DataError(format + ": unsupported version");
    }
}

json parse_json(const std::string& text, const std::string& format) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(format + ": " + e.what(), e.byte);
    }
}

// Wraps nlohmann type/key errors so malformed documents surface as data errors.
template <class Fn>
auto guarded(const std::string& format, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw DataError(format + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(format + ": " + e.what());
    }
}

json estimate_json(const OffsetEstimate& est) {
    return json{{"ell", est.ell},       {"eps", est.eps},
                {"tau", est.tau},       {"phi", est.phi},
                {"peak_magnitude", est.peak_magnitude}, {"kappa_step", est.kappa_step}};
}

OffsetEstimate estimate_from(const json& j) {
    OffsetEstimate est;
    est.ell = j.at("ell").get<long>();
    est.eps = j.at("eps").get<double>();
    est.tau = j.at("tau").get<double>();
    est.phi = j.at("phi").get<double>();
    est.peak_magnitude = j.at("peak_magnitude").get<double>();
    est.kappa_step = j.at("kappa_step").get<double>();
    return est;
}

} // namespace

std::string ensemble_to_json(const ImpairmentEnsemble& ensemble) {
    json doc{{"format", "acal-ensemble"},
             {"version", kFormatVersion},
             {"seed", ensemble.seed},
             {"profile", to_string(ensemble.profile)},
             {"fft_size", ensemble.fft_size()}};
    json channels = json::array();
    for (std::size_t m = 0; m < ensemble.size(); ++m) {
        const auto& imp = ensemble.channels[m];
        channels.push_back(json{{"channel", m}, {"tau", imp.tau}, {"phi", imp.phi}, {"gain", imp.gain}});
    }
    doc["channels"] = std::move(channels);
    return doc.dump(1) + "\n";
}

ImpairmentEnsemble ensemble_from_json(const std::string& text) {
    const json doc = parse_json(text, "acal-ensemble");
    check_header(doc, "acal-ensemble");
    return guarded("acal-ensemble", [&] {
        ImpairmentEnsemble ens;
        ens.seed = doc.at("seed").get<std::uint64_t>();
        ens.profile = parse_impairment_profile(doc.at("profile").get<std::string>());
        const auto n = doc.at("fft_size").get<std::size_t>();
        const auto& channels = doc.at("channels");
        if (!channels.is_array() || channels.empty()) {
            throw DataError("acal-ensemble: no channels");
        }
        for (std::size_t m = 0; m < channels.size(); ++m) {
            const auto& c = channels[m];
            ChannelImpairment imp{c.at("tau").get<double>(), c.at("phi").get<double>(),
                                  c.at("gain").get<std::vector<double>>()};
            try {
                imp.validate(n);
            } catch (const std::invalid_argument& e) {
                throw DataError("acal-ensemble: channel " + std::to_string(m) + ": " + e.what());
            }
            ens.channels.push_back(std::move(imp));
        }
        return ens;
    });
}

void write_ensemble(const ImpairmentEnsemble& ensemble, const std::filesystem::path& path) {
    write_text_atomic(path, ensemble_to_json(ensemble));
}

ImpairmentEnsemble read_ensemble(const std::filesystem::path& path) {
    return ensemble_from_json(read_text_file(path));
}

std::vector<Spectrum> FilterExport::compensations() const {
    std::vector<Spectrum> out;
    out.reserve(channels.size());
    for (const auto& c : channels) {
        out.push_back(c.compensation);
    }
    return out;
}

FilterExport make_filter_export(const CalibrationConfig& cfg, const PilotSpec& pilot,
                                const std::vector<ChannelCalibration>& cals) {
    FilterExport fx;
    fx.mode = cfg.mode;
    fx.fft_size = pilot.fft_size;
    fx.delay_taps = cfg.delay_taps;
    fx.equalizer_taps = cfg.equalizer_taps;
    fx.lambda = cfg.lambda;
    fx.target_gain = cfg.target_gain;
    fx.kappa_step = cfg.kappa_step;
    fx.active_bins = pilot.active_bins;
    for (const auto& c : cals) {
        ExportedChannel ch{c.channel, c.estimate, std::nullopt, 0, c.compensation};
        if (c.filter) {
            ch.f_taps = c.filter->f_taps;
            ch.latency = c.filter->latency;
        }
        fx.channels.push_back(std::move(ch));
    }
    return fx;
}

std::string filter_export_to_json(const FilterExport& fx) {
    json doc{{"format", "acal-filters"},
             {"version", kFormatVersion},
             {"mode", to_string(fx.mode)},
             {"fft_size", fx.fft_size},
             {"kappa_step", fx.kappa_step},
             {"active_bins", fx.active_bins}};
    json channels = json::array();
    for (const auto& c : fx.channels) {
        json ch{{"channel", c.channel},
                {"tau", c.estimate.tau},
                {"phi", c.estimate.phi},
                {"delay_taps", fx.delay_taps},
                {"equalizer_taps", fx.equalizer_taps},
                {"target_gain", fx.target_gain},
                {"lambda", fx.lambda},
                {"latency", c.latency},
                {"estimate", estimate_json(c.estimate)}};
        if (c.f_taps) {
            ch["taps"] = complex_pairs(c.f_taps->values());
        } else {
            json comp = json::array();
            for (std::size_t k : fx.active_bins) {
                comp.push_back(json::array({k, c.compensation[k].real(), c.compensation[k].imag()}));
            }
            ch["compensation"] = std::move(comp);
        }
        channels.push_back(std::move(ch));
    }
    doc["channels"] = std::move(channels);
    return doc.dump(1) + "\n";
}

FilterExport filter_export_from_json(const std::string& text) {
    const json doc = parse_json(text, "acal-filters");
    check_header(doc, "acal-filters");
    return guarded("acal-filters", [&] {
        FilterExport fx;
        fx.mode = parse_compensation_mode(doc.at("mode").get<std::string>());
        fx.fft_size = doc.at("fft_size").get<std::size_t>();
        fx.kappa_step = doc.at("kappa_step").get<double>();
        fx.active_bins = doc.at("active_bins").get<std::vector<std::size_t>>();
        PilotSpec{fx.fft_size, fx.active_bins, 0}.validate();
        const auto& channels = doc.at("channels");
        if (!channels.is_array() || channels.empty()) {
            throw DataError("acal-filters: no channels");
        }
        for (const auto& c : channels) {
            ExportedChannel ch{c.at("channel").get<std::size_t>(), estimate_from(c.at("estimate")), std::nullopt,
                               c.at("latency").get<std::size_t>(), Spectrum(std::vector<cplx>(fx.fft_size))};
            fx.delay_taps = c.at("delay_taps").get<std::size_t>();
            fx.equalizer_taps = c.at("equalizer_taps").get<std::size_t>();
            fx.target_gain = c.at("target_gain").get<double>();
            fx.lambda = c.at("lambda").get<double>();
            const std::string where = "acal-filters: channel " + std::to_string(ch.channel);
            if (fx.mode == CompensationMode::fir) {
                ch.f_taps = ComplexSequence(read_pairs(c.at("taps"), where + " taps"));
                if (ch.f_taps->size() > fx.fft_size || ch.latency >= ch.f_taps->size()) {
                    throw DataError(where + ": tap count or latency inconsistent with fft_size");
                }
                ch.compensation = fir_response(*ch.f_taps, fx.fft_size, ch.latency);
            } else {
                std::vector<cplx> comp(fx.fft_size, cplx{});
                for (const auto& e : c.at("compensation")) {
                    const auto k = e.at(0).get<std::size_t>();
                    if (k >= fx.fft_size) {
                        throw DataError(where + ": compensation bin " + std::to_string(k) + " out of range");
                    }
                    comp[k] = cplx(e.at(1).get<double>(), e.at(2).get<double>());
                }
                ch.compensation = Spectrum(std::move(comp));
            }
            fx.channels.push_back(std::move(ch));
        }
        return fx;
    });
}

void write_filter_export(const FilterExport& fx, const std::filesystem::path& path) {
    write_text_atomic(path, filter_export_to_json(fx));
}

FilterExport read_filter_export(const std::filesystem::path& path) {
    return filter_export_from_json(read_text_file(path));
}

} // namespace acal
