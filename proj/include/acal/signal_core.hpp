#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace acal {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct TimeDomainTag {};
struct FrequencyDomainTag {};

/// Non-empty, finite complex sequence. The tag keeps time-domain samples and
/// DFT bins from being mixed up at API boundaries.
template <class Domain>
class BasicSequence {
public:
    explicit BasicSequence(std::vector<cplx> values);
    BasicSequence(std::initializer_list<cplx> values) : BasicSequence(std::vector<cplx>(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    const cplx& operator[](std::size_t i) const { return values_[i]; }
    std::span<const cplx> values() const noexcept { return values_; }
    const std::vector<cplx>& vector() const noexcept { return values_; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    bool operator==(const BasicSequence&) const = default;

private:
    std::vector<cplx> values_;
};

using ComplexSequence = BasicSequence<TimeDomainTag>;
using Spectrum = BasicSequence<FrequencyDomainTag>;

extern template class BasicSequence<TimeDomainTag>;
extern template class BasicSequence<FrequencyDomainTag>;

/// X[k] = sum_n x[n] e^{-j2πkn/N}; unnormalized.
Spectrum dft(const ComplexSequence& x);

/// x[n] = (1/N) sum_k X[k] e^{+j2πkn/N}.
ComplexSequence idft(const Spectrum& X);

// Span-level transforms for internal hot loops. Same conventions as above;
// they throw std::invalid_argument on empty input.
std::vector<cplx> forward_transform(std::span<const cplx> x);
std::vector<cplx> inverse_transform(std::span<const cplx> X);

enum class ConvolutionMode { linear, circular };

/// Linear mode returns |a|+|b|-1 samples. Circular mode returns |a| samples
/// and zero-pads b when it is shorter than a; a longer b is rejected.
ComplexSequence convolve(const ComplexSequence& a, const ComplexSequence& b, ConvolutionMode mode);

/// Classic Hamming window 0.54 - 0.46 cos(2πn/(L-1)); L == 1 yields {1.0}.
std::vector<double> hamming_window(std::size_t length);

/// Signed frequency index of DFT bin k: k for k < N/2, k - N otherwise.
/// Fractional-sample phase ramps are evaluated on this index so that they
/// describe a physical (band-limited) delay of the time-domain sequence.
inline long signed_bin(std::size_t k, std::size_t n) {
    const long kk = static_cast<long>(k);
    const long nn = static_cast<long>(n);
    return 2 * kk < nn ? kk : kk - nn;
}

/// e^{-j2π·s·delay/N} with s = signed_bin(k, N): the response of a delay of
/// `delay` samples at bin k.
cplx delay_phasor(std::size_t k, std::size_t n, double delay);

double power_db(double linear);

} // namespace acal
