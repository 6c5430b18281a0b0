#include "acal/nullform.hpp"
#include "acal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acal {

namespace {

cplx inner(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    cplx s{};
    for (std::size_t i = 0; i < u.size(); ++i) {
        s += std::conj(u[i]) * v[i];
    }
    return s;
}

double norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& x : v) {
        s += std::norm(x);
    }
    return s;
}

} // namespace

std::vector<cplx> nullform_vector(const ArrayGeometry& geom, double theta0_deg, double theta1_deg) {
    const auto a0 = steering_vector(geom, theta0_deg);
    const auto a1 = steering_vector(geom, theta1_deg);
    const cplx coef = inner(a1, a0) / norm2(a1);
    std::vector<cplx> b(a0.size());
    for (std::size_t m = 0; m < b.size(); ++m) {
        b[m] = a0[m] - coef * a1[m];
    }
    if (norm2(b) <= 1e-18 * norm2(a0)) {
        throw std::invalid_argument("null direction coincides with the look direction; projection is degenerate");
    }
    // Second Gram-Schmidt pass on the rounding residue along a1.
    const cplx residue = inner(a1, b) / norm2(a1);
    for (std::size_t m = 0; m < b.size(); ++m) {
        b[m] -= residue * a1[m];
    }
    return b;
}

std::size_t EqualizedResponse::bin_index(std::size_t k) const {
    const auto it = std::lower_bound(bins.begin(), bins.end(), k);
    if (it == bins.end() || *it != k) {
        throw std::invalid_argument("bin " + std::to_string(k) + " is not part of the equalized response");
    }
    return static_cast<std::size_t>(it - bins.begin());
}

EqualizedResponse equalized_response(const ArrayGeometry& geom, const std::vector<Spectrum>& responses,
                                     const std::vector<Spectrum>& compensations,
                                     const std::vector<std::size_t>& bins) {
    geom.validate();
    if (responses.size() != geom.channels) {
        throw std::invalid_argument("expected " + std::to_string(geom.channels) + " channel responses, got " +
                                    std::to_string(responses.size()));
    }
    if (!compensations.empty() && compensations.size() != responses.size()) {
        throw std::invalid_argument("compensation count does not match channel count");
    }
    if (bins.empty() || !std::is_sorted(bins.begin(), bins.end()) ||
        std::adjacent_find(bins.begin(), bins.end()) != bins.end()) {
        throw std::invalid_argument("evaluation bins must be non-empty, sorted and unique");
    }
    EqualizedResponse out{geom, bins, {}};
    out.per_channel.resize(geom.channels);
    for (std::size_t m = 0; m < geom.channels; ++m) {
        const Spectrum& h = responses[m];
        if (!compensations.empty() && compensations[m].size() != h.size()) {
            throw std::invalid_argument("compensation and response sizes differ on channel " + std::to_string(m));
        }
        auto& row = out.per_channel[m];
        row.reserve(bins.size());
        for (std::size_t k : bins) {
            if (k >= h.size()) {
                throw std::invalid_argument("evaluation bin " + std::to_string(k) + " out of range");
            }
            row.push_back(compensations.empty() ? h[k] : compensations[m][k] * h[k]);
        }
    }
    return out;
}

namespace {

cplx beam_output(const std::vector<cplx>& b, const EqualizedResponse& resp, std::size_t idx,
                 const std::vector<cplx>& a) {
    cplx s{};
    for (std::size_t m = 0; m < b.size(); ++m) {
        s += std::conj(b[m]) * resp.per_channel[m][idx] * a[m];
    }
    return s;
}

} // namespace

std::vector<double> beam_power(const std::vector<cplx>& b, const EqualizedResponse& resp, std::size_t bin,
                               const std::vector<double>& theta_grid_deg) {
    if (b.size() != resp.geometry.channels) {
        throw std::invalid_argument("beamformer length does not match the array");
    }
    if (theta_grid_deg.empty()) {
        throw std::invalid_argument("angle grid is empty");
    }
    const std::size_t idx = resp.bin_index(bin);
    std::vector<double> p;
    p.reserve(theta_grid_deg.size());
    for (double theta : theta_grid_deg) {
        p.push_back(std::norm(beam_output(b, resp, idx, steering_vector(resp.geometry, theta))));
    }
    return p;
}

std::vector<double> beampattern(const std::vector<cplx>& b, const EqualizedResponse& resp, std::size_t bin,
                                const std::vector<double>& theta_grid_deg) {
    auto p = beam_power(b, resp, bin, theta_grid_deg);
    const double peak = *std::max_element(p.begin(), p.end());
    for (auto& v : p) {
        v = peak > 0.0 ? power_db(v / peak) : power_db(0.0);
    }
    return p;
}

void summarize_nulling(NullformReport& report) {
    const double count = static_cast<double>(report.q_linear.size());
    double mean = 0.0;
    for (double q : report.q_linear) {
        mean += q;
    }
    mean /= count;
    double var = 0.0;
    for (double q : report.q_linear) {
        var += (q - mean) * (q - mean);
    }
    var /= count;
    report.q_avg_linear = mean;
    report.q_avg_db = power_db(mean);
    report.q_std_linear = std::sqrt(var);
    report.q_std_db = power_db(report.q_std_linear);
}

NullformReport nulling_ratio(const std::vector<cplx>& b, const EqualizedResponse& resp, double theta0_deg,
                             double theta1_deg, const std::vector<std::size_t>& bins) {
    if (b.size() != resp.geometry.channels) {
        throw std::invalid_argument("beamformer length does not match the array");
    }
    if (bins.empty()) {
        throw std::invalid_argument("no bins to evaluate");
    }
    const auto a0 = steering_vector(resp.geometry, theta0_deg);
    const auto a1 = steering_vector(resp.geometry, theta1_deg);
    NullformReport report;
    report.theta0_deg = theta0_deg;
    report.theta1_deg = theta1_deg;
    report.bins = bins;
    report.q_linear.reserve(bins.size());
    report.q_db.reserve(bins.size());
    for (std::size_t k : bins) {
        const std::size_t idx = resp.bin_index(k);
        const double desired = std::norm(beam_output(b, resp, idx, a0));
        const double nulled = std::norm(beam_output(b, resp, idx, a1));
        if (!(desired > 0.0)) {
            throw EvaluationError("beam has zero response toward theta0 at bin " + std::to_string(k));
        }
        const double q = nulled / desired;
        report.q_linear.push_back(q);
        report.q_db.push_back(power_db(q));
    }
    summarize_nulling(report);
    return report;
}

} // namespace acal
