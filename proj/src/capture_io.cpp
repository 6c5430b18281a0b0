#include "acal/errors.hpp"
#include "acal/io_util.hpp"
#include "acal/sim_frontend.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

namespace acal {

namespace {

template <class T>
void put_le(std::string& buf, T value) {
    using U = std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>;
    auto bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        buf.push_back(static_cast<char>(bits & 0xFFu));
        bits = static_cast<U>(bits >> 8);
    }
}

template <class T>
T get_le(const std::string& buf, std::size_t offset) {
    using U = std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bits |= static_cast<U>(static_cast<U>(static_cast<unsigned char>(buf[offset + i])) << (8 * i));
    }
    return std::bit_cast<T>(bits);
}

} // namespace

void write_capture(const CaptureSet& set, const std::filesystem::path& path) {
    set.validate();
    if (set.num_channels() > std::numeric_limits<std::uint16_t>::max()) {
        throw std::invalid_argument("too many channels for the capture format");
    }
    if (set.length() > std::numeric_limits<std::uint32_t>::max()) {
        throw std::invalid_argument("capture too long for the capture format");
    }
    std::string buf;
    buf.reserve(kCaptureHeaderBytes + set.num_channels() * set.length() * 8);
    buf.append("ACAL");
    put_le(buf, kCaptureVersion);
    put_le(buf, static_cast<std::uint16_t>(set.num_channels()));
    put_le(buf, static_cast<std::uint32_t>(set.length()));
    put_le(buf, set.sample_rate);
    put_le(buf, set.seed);
    for (const auto& ch : set.channels) {
        for (const auto& s : ch) {
            put_le(buf, static_cast<float>(s.real()));
            put_le(buf, static_cast<float>(s.imag()));
        }
    }
    write_file_atomic(path, [&](std::ostream& out) { out.write(buf.data(), static_cast<std::streamsize>(buf.size())); },
                      true);
}

CaptureSet read_capture(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open capture file '" + path.string() + "'");
    }
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < 4 || std::memcmp(buf.data(), "ACAL", 4) != 0) {
        throw ParseError("bad magic in '" + path.string() + "'", 0);
    }
    if (buf.size() < kCaptureHeaderBytes) {
        throw ParseError("truncated header in '" + path.string() + "'", buf.size());
    }
    const auto version = get_le<std::uint16_t>(buf, 4);
    if (version != kCaptureVersion) {
        throw ParseError("unsupported capture version " + std::to_string(version), 4);
    }
    const auto channels = get_le<std::uint16_t>(buf, 6);
    const auto length = get_le<std::uint32_t>(buf, 8);
    if (channels == 0) {
        throw ParseError("capture declares zero channels", 6);
    }
    if (length == 0) {
        throw ParseError("capture declares zero-length channels", 8);
    }
    CaptureSet set;
    set.origin = CaptureOrigin::file;
    set.sample_rate = get_le<double>(buf, 12);
    set.seed = get_le<std::uint64_t>(buf, 20);

    const std::uint64_t per_channel = std::uint64_t{length} * 8;
    const std::uint64_t expected = kCaptureHeaderBytes + per_channel * channels;
    if (buf.size() < expected) {
        // Report where the first incomplete channel starts.
        const std::uint64_t complete = (buf.size() - kCaptureHeaderBytes) / per_channel;
        throw ParseError("truncated payload: channel " + std::to_string(complete) + " of " + std::to_string(channels) +
                             " is incomplete",
                         kCaptureHeaderBytes + complete * per_channel);
    }
    if (buf.size() > expected) {
        throw ParseError("payload longer than " + std::to_string(channels) + " channels of " + std::to_string(length) +
                             " samples (channel-length mismatch)",
                         expected);
    }
    set.channels.reserve(channels);
    std::size_t offset = kCaptureHeaderBytes;
    for (std::size_t m = 0; m < channels; ++m) {
        std::vector<cplx> samples(length);
        for (std::size_t i = 0; i < length; ++i, offset += 8) {
            const float re = get_le<float>(buf, offset);
            const float im = get_le<float>(buf, offset + 4);
            if (!std::isfinite(re) || !std::isfinite(im)) {
                throw ParseError("non-finite sample in channel " + std::to_string(m), offset);
            }
            samples[i] = cplx{re, im};
        }
        set.channels.emplace_back(std::move(samples));
    }
    return set;
}

void write_capture_csv(const CaptureSet& set, const std::filesystem::path& path) {
    set.validate();
    write_file_atomic(path, [&](std::ostream& out) {
        out << "index";
        for (std::size_t m = 0; m < set.num_channels(); ++m) {
            out << ",ch" << m << "_i,ch" << m << "_q";
        }
        out << '\n' << std::setprecision(9);
        for (std::size_t n = 0; n < set.length(); ++n) {
            out << n;
            for (const auto& ch : set.channels) {
                out << ',' << ch[n].real() << ',' << ch[n].imag();
            }
            out << '\n';
        }
    });
}

} // namespace acal
