#include "diffred/random.hpp"

#include <cmath>
#include <numbers>

namespace diffred {

namespace {

// SplitMix64 finalizer; full avalanche on 64 bits.
std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t derive_key(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index) {
    std::uint64_t h = mix64(seed + kGolden);
    h = mix64(h ^ (static_cast<std::uint64_t>(purpose) * 0xd6e8feb86659fd93ULL));
    h = mix64(h ^ (index + kGolden));
    return h;
}

} // namespace

const char* to_string(StreamPurpose p) {
    switch (p) {
    case StreamPurpose::GaussianMap: return "GAUSSIAN_MAP";
    case StreamPurpose::SynthData: return "SYNTH_DATA";
    case StreamPurpose::SvdInit: return "SVD_INIT";
    case StreamPurpose::StressSample: return "STRESS_SAMPLE";
    case StreamPurpose::RmapBaseline: return "RMAP_BASELINE";
    }
    return "UNKNOWN";
}

RandomStream::RandomStream(std::uint64_t master_seed, StreamPurpose purpose,
                           std::uint64_t stream_index)
    : master_seed_(master_seed), purpose_(purpose), stream_index_(stream_index),
      key_(derive_key(master_seed, purpose, stream_index)) {}

RandomStream RandomStream::derived(std::uint64_t stream_index) const {
    return RandomStream(master_seed_, purpose_, stream_index);
}

std::uint64_t RandomStream::next_u64() {
    return mix64(key_ + counter_++ * kGolden);
}

double RandomStream::next_unit() {
    // 53-bit mantissa, shifted into (0, 1].
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double RandomStream::next_gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

void RandomStream::fill_gaussian(std::span<double> out) {
    for (double& v : out) {
        v = next_gaussian();
    }
}

std::vector<double> gaussian_draw(RandomStream& stream, std::size_t count) {
    std::vector<double> out(count);
    stream.fill_gaussian(out);
    return out;
}

} // namespace diffred
