#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace ncsimo {

/// Independent randomness consumers of one simulated block.
enum class StreamRole : std::uint32_t {
    Placement = 1,
    Shadowing = 2,
    Fading = 3,
    Noise = 4,
    Data = 5,
};

std::string_view to_string(StreamRole role);

/// Counter-based generator: output n is a bijective mix of (key + n * gamma),
/// so any position of a stream is reachable in O(1) and streams keyed by
/// (seed, block, role) do not depend on the order in which blocks are run.
///
/// Satisfies UniformRandomBitGenerator.
class StreamRng {
public:
    using result_type = std::uint64_t;

    StreamRng(std::uint64_t seed, std::uint64_t block, StreamRole role);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    void discard(std::uint64_t n) { counter_ += n; }
    std::uint64_t key() const { return key_; }
    std::uint64_t position() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace ncsimo
