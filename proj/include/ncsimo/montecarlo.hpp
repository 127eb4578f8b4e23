#pragma once

// Deterministic, parallel BER estimation. Block b of a run draws all its
// randomness from streams keyed by (seed, b, role), so every scheme sees the
// same placements, shadowing, fading and noise for the same block and the
// result does not depend on how blocks are spread over workers.

#include "ncsimo/config.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ncsimo {

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

/// Wilson score interval for `errors` successes in `n` Bernoulli trials.
WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t n,
                               double z = 1.959963984540054);

struct BerRecord {
    Scheme scheme = Scheme::Proposed;
    std::size_t users = 0;
    std::size_t antennas = 0;
    std::string placement;  // "annulus" or "fixed"
    double radius_m = 0.0;  // cell radius, or the fixed distance
    std::uint64_t trials = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    double ber = 0.0;
    WilsonInterval ci;
    std::uint64_t seed = 0;
    double bits_per_slot_per_user = 0.0;
    std::uint64_t failures = 0;  // blocks whose detector gave up (counted as all-wrong)
};

/// Blocks per scheduling unit. Early stopping is only checked at chunk
/// boundaries, which keeps the stopping point independent of worker count.
inline constexpr std::uint64_t kChunkBlocks = 256;

std::size_t bits_per_block(Scheme scheme, std::size_t users);
std::size_t slots_per_block(Scheme scheme, std::size_t users);

struct BlockOutcome {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    bool failure = false;
};

/// Simulates one coherence block of `scheme` with `antennas` receive antennas.
BlockOutcome simulate_block(const SimConfig& cfg, Scheme scheme, std::size_t antennas,
                            std::uint64_t block);

/// Runs blocks 0, 1, ... until the error target or the trial cap is reached.
BerRecord run_ber_point(const SimConfig& cfg, Scheme scheme, std::size_t antennas,
                        unsigned workers = 1);

/// One record per (scheme, M) in config order.
std::vector<BerRecord> run_ber_sweep(const SimConfig& cfg, unsigned workers = 1);

} // namespace ncsimo
