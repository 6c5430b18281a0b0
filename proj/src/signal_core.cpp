#include "acal/signal_core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace acal {

template <class Domain>
BasicSequence<Domain>::BasicSequence(std::vector<cplx> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("sequence must contain at least one sample");
    }
    for (const auto& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("sequence contains a non-finite value");
        }
    }
}

template class BasicSequence<TimeDomainTag>;
template class BasicSequence<FrequencyDomainTag>;

namespace {

// FFTW planning is not thread-safe; execution on new arrays is. Plans are
// created once per (size, direction) and kept for the process lifetime.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        std::vector<fftw_complex> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(n, in.data(), out.data(), sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) {
            throw std::runtime_error("FFTW failed to create a plan of size " + std::to_string(n));
        }
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

std::vector<cplx> transform(std::span<const cplx> in, int sign) {
    if (in.empty()) {
        throw std::invalid_argument("transform of an empty sequence");
    }
    const int n = static_cast<int>(in.size());
    fftw_plan plan = PlanCache::instance().get(n, sign);
    std::vector<cplx> src(in.begin(), in.end());
    std::vector<cplx> out(in.size());
    // std::complex<double> is layout-compatible with fftw_complex.
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(src.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

} // namespace

std::vector<cplx> forward_transform(std::span<const cplx> x) { return transform(x, FFTW_FORWARD); }

std::vector<cplx> inverse_transform(std::span<const cplx> X) {
    auto out = transform(X, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(X.size());
    for (auto& v : out) {
        v *= scale;
    }
    return out;
}

Spectrum dft(const ComplexSequence& x) { return Spectrum(forward_transform(x.values())); }

ComplexSequence idft(const Spectrum& X) { return ComplexSequence(inverse_transform(X.values())); }

ComplexSequence convolve(const ComplexSequence& a, const ComplexSequence& b, ConvolutionMode mode) {
    std::size_t n = 0;
    if (mode == ConvolutionMode::circular) {
        if (b.size() > a.size()) {
            throw std::invalid_argument("circular convolution needs |b| <= |a|");
        }
        n = a.size();
    } else {
        n = a.size() + b.size() - 1;
    }
    std::vector<cplx> pa(n, cplx{}), pb(n, cplx{});
    std::copy(a.begin(), a.end(), pa.begin());
    std::copy(b.begin(), b.end(), pb.begin());
    auto fa = forward_transform(pa);
    const auto fb = forward_transform(pb);
    for (std::size_t k = 0; k < n; ++k) {
        fa[k] *= fb[k];
    }
    return ComplexSequence(inverse_transform(fa));
}

std::vector<double> hamming_window(std::size_t length) {
    if (length == 0) {
        throw std::invalid_argument("window length must be positive");
    }
    if (length == 1) {
        return {1.0};
    }
    std::vector<double> w(length);
    const double denom = static_cast<double>(length - 1);
    for (std::size_t n = 0; n < length; ++n) {
        w[n] = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(n) / denom);
    }
    // Enforce exact symmetry; the cosine is only symmetric to rounding.
    for (std::size_t n = 0; n < length / 2; ++n) {
        w[length - 1 - n] = w[n];
    }
    return w;
}

cplx delay_phasor(std::size_t k, std::size_t n, double delay) {
    const long s = signed_bin(k, n);
    double cycles = 0.0;
    if (delay == std::floor(delay) && std::abs(delay) < 1e15) {
        // Integer delays: reduce modulo N first so the angle stays exact.
        const long nn = static_cast<long>(n);
        const long prod = (s * static_cast<long>(delay)) % nn;
        cycles = static_cast<double>(prod) / static_cast<double>(nn);
    } else {
        cycles = static_cast<double>(s) * delay / static_cast<double>(n);
    }
    return std::polar(1.0, -2.0 * kPi * cycles);
}

double power_db(double linear) {
    constexpr double kFloor = 1e-40; // -400 dB
    return 10.0 * std::log10(std::max(linear, kFloor));
}

} // namespace acal
