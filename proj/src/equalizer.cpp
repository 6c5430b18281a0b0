#include "acal/calibration.hpp"
#include "acal/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace acal {

void EqualizerConfig::validate(std::size_t fft_size) const {
    if (taps < 1) {
        throw std::invalid_argument("equalizer needs at least one tap");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("regularization weight must be finite and non-negative");
    }
    if (!(target_gain > 0.0) || !std::isfinite(target_gain)) {
        throw std::invalid_argument("target gain must be finite and positive");
    }
    if (active_bins.empty()) {
        throw std::invalid_argument("equalizer needs at least one active bin");
    }
    if (taps > active_bins.size()) {
        throw std::invalid_argument("equalizer has " + std::to_string(taps) + " taps but only " +
                                    std::to_string(active_bins.size()) + " active bins");
    }
    if (taps > fft_size) {
        throw std::invalid_argument("equalizer longer than the DFT size");
    }
    for (std::size_t k : active_bins) {
        if (k >= fft_size) {
            throw std::invalid_argument("active bin " + std::to_string(k) + " out of range");
        }
    }
}

ComplexSequence design_equalizer(const Spectrum& g_hat, const EqualizerConfig& cfg) {
    const std::size_t n = g_hat.size();
    cfg.validate(n);
    const std::size_t taps = cfg.taps;

    // B = Aᴴ diag(|Ĝ|² + λ) A is Hermitian Toeplitz with first column
    // t[d] = Σ_k (|Ĝ_k|² + λ) e^{+j2πkd/N}, and the right-hand side is
    // G0 Σ_k Ĝ*_k e^{+j2πkn/N}. Both are N times an inverse DFT.
    std::vector<cplx> weight(n, cplx{});
    std::vector<cplx> cross(n, cplx{});
    for (std::size_t k : cfg.active_bins) {
        weight[k] = std::norm(g_hat[k]) + cfg.lambda;
        cross[k] = cfg.target_gain * std::conj(g_hat[k]);
    }
    const auto t = inverse_transform(weight);
    const auto r = inverse_transform(cross);
    const double scale = static_cast<double>(n);

    Eigen::MatrixXcd b(taps, taps);
    Eigen::VectorXcd rhs(taps);
    for (std::size_t i = 0; i < taps; ++i) {
        rhs(static_cast<Eigen::Index>(i)) = scale * r[i];
        for (std::size_t j = 0; j < taps; ++j) {
            const cplx v = i >= j ? scale * t[i - j] : std::conj(scale * t[j - i]);
            b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }

    Eigen::LDLT<Eigen::MatrixXcd> ldlt(b);
    const double rcond = ldlt.info() == Eigen::Success ? ldlt.rcond() : 0.0;
    const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(condition <= kMaxEqualizerCondition)) {
        throw IllConditionedError("equalizer normal equations are ill-conditioned", condition);
    }
    const Eigen::VectorXcd q = ldlt.solve(rhs);
    std::vector<cplx> out(taps);
    for (std::size_t i = 0; i < taps; ++i) {
        out[i] = q(static_cast<Eigen::Index>(i));
    }
    return ComplexSequence(std::move(out));
}

} // namespace acal
