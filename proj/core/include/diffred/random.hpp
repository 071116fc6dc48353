#ifndef DIFFRED_RANDOM_HPP
#define DIFFRED_RANDOM_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace diffred {

/// Labels keep streams for unrelated uses statistically independent even
/// under the same master seed.
enum class StreamPurpose : std::uint64_t {
    GaussianMap = 1,
    SynthData = 2,
    SvdInit = 3,
    StressSample = 4,
    RmapBaseline = 5,
};

const char* to_string(StreamPurpose p);

/// Counter-based pseudorandom stream. The key is derived from
/// (master_seed, purpose, stream_index); output word i is a fixed mixing
/// function of (key, i), so the whole sequence is reproducible and streams
/// with distinct keys are independent. Gaussian variates come from
/// Box-Muller over the uniform output.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, StreamPurpose purpose,
                 std::uint64_t stream_index = 0);

    /// Fresh stream with the same seed and purpose but a different index;
    /// counter starts at zero.
    RandomStream derived(std::uint64_t stream_index) const;

    std::uint64_t next_u64();
    /// Uniform in (0, 1); never returns 0 so log() is safe.
    double next_unit();
    double next_gaussian();
    void fill_gaussian(std::span<double> out);

    std::uint64_t master_seed() const { return master_seed_; }
    StreamPurpose purpose() const { return purpose_; }
    std::uint64_t stream_index() const { return stream_index_; }

private:
    std::uint64_t master_seed_;
    StreamPurpose purpose_;
    std::uint64_t stream_index_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// `count` i.i.d. standard normal variates from the stream.
std::vector<double> gaussian_draw(RandomStream& stream, std::size_t count);

} // namespace diffred

#endif
