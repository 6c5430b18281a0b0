#pragma once

#include "acal/array_model.hpp"
#include "acal/signal_core.hpp"

#include <cstddef>
#include <vector>

namespace acal {

/// b = a(θ0) - (a(θ1)ᴴa(θ0) / ‖a(θ1)‖²)·a(θ1): steers to θ0 with an exact
/// null at θ1. Throws std::invalid_argument when the projection is
/// degenerate (θ0 == θ1 or an equivalent grating direction).
std::vector<cplx> nullform_vector(const ArrayGeometry& geom, double theta0_deg, double theta1_deg);

/// Per-channel equalized responses F_m[k]H_m[k] on a list of bins. The
/// steering factor a_m(θ) is applied at evaluation time.
struct EqualizedResponse {
    ArrayGeometry geometry;
    std::vector<std::size_t> bins;
    std::vector<std::vector<cplx>> per_channel;  // [m][i] for bins[i]

    std::size_t bin_index(std::size_t k) const;  // position of bin k, throws if absent
};

/// η from ground-truth responses H_m and compensations F_m (both N bins).
/// An empty compensation list means "uncalibrated" (F ≡ 1).
EqualizedResponse equalized_response(const ArrayGeometry& geom, const std::vector<Spectrum>& responses,
                                     const std::vector<Spectrum>& compensations,
                                     const std::vector<std::size_t>& bins);

/// Raw beam power |Σ_m b*_m η_m a_m(θ)|² at one bin over an angle grid.
std::vector<double> beam_power(const std::vector<cplx>& b, const EqualizedResponse& resp, std::size_t bin,
                               const std::vector<double>& theta_grid_deg);

/// Beam power in dB normalized to its own maximum.
std::vector<double> beampattern(const std::vector<cplx>& b, const EqualizedResponse& resp, std::size_t bin,
                                const std::vector<double>& theta_grid_deg);

/// Nulling ratio Q = |bᴴη(θ1,k)|² / |bᴴη(θ0,k)|². More negative dB is a
/// deeper null. Q̄ and the spread are computed on linear Q, then reported
/// in dB.
struct NullformReport {
    double theta0_deg = 0.0;
    double theta1_deg = 0.0;
    std::vector<std::size_t> bins;
    std::vector<double> q_linear;
    std::vector<double> q_db;
    double q_avg_linear = 0.0;
    double q_avg_db = 0.0;
    double q_std_linear = 0.0;
    double q_std_db = 0.0;
};

NullformReport nulling_ratio(const std::vector<cplx>& b, const EqualizedResponse& resp, double theta0_deg,
                             double theta1_deg, const std::vector<std::size_t>& bins);

/// Linear-domain mean and population standard deviation of per-bin Q.
void summarize_nulling(NullformReport& report);

} // namespace acal
