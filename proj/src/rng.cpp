#include "ncsimo/rng.hpp"

namespace ncsimo {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

std::string_view to_string(StreamRole role) {
    switch (role) {
    case StreamRole::Placement: return "placement";
    case StreamRole::Shadowing: return "shadowing";
    case StreamRole::Fading: return "fading";
    case StreamRole::Noise: return "noise";
    case StreamRole::Data: return "data";
    }
    return "unknown";
}

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t block, StreamRole role) {
    // Chained absorption keeps (seed, block, role) tuples from colliding
    // through simple arithmetic relations between the fields.
    std::uint64_t h = mix64(seed + kGamma);
    h = mix64(h ^ (block + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ (static_cast<std::uint64_t>(role) * 0xd1b54a32d192ed03ULL));
    key_ = h;
}

StreamRng::result_type StreamRng::operator()() {
    return mix64(key_ + (++counter_) * kGamma);
}

} // namespace ncsimo
