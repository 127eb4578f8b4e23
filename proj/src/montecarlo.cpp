#include "ncsimo/montecarlo.hpp"

#include "ncsimo/baselines.hpp"
#include "ncsimo/errors.hpp"
#include "ncsimo/linkdesign.hpp"
#include "ncsimo/modem.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace ncsimo {

namespace {

BitWord draw_bits(std::size_t count, StreamRng& rng) {
    BitWord word;
    word.bits.resize(count);
    std::uint64_t pool = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 64 == 0) {
            pool = rng();
        }
        word.bits[i] = static_cast<std::uint8_t>(pool & 1U);
        pool >>= 1;
    }
    return word;
}

struct BlockDraw {
    std::vector<UserProfile> profiles;
    ChannelRealization channel;
};

BlockDraw draw_block(const SimConfig& cfg, std::size_t antennas, std::uint64_t block) {
    StreamRng placement(cfg.seed, block, StreamRole::Placement);
    StreamRng shadowing(cfg.seed, block, StreamRole::Shadowing);
    StreamRng fading(cfg.seed, block, StreamRole::Fading);
    const auto large = draw_large_scale(cfg.num_users, cfg.placement, cfg.radio, placement, shadowing);
    const auto powers = cfg.power_watts();
    BlockDraw draw;
    draw.profiles.resize(cfg.num_users);
    for (std::size_t u = 0; u < cfg.num_users; ++u) {
        draw.profiles[u] = {powers[u], large.beta[u]};
    }
    draw.channel.fading = draw_fading(antennas, cfg.num_users, fading);
    draw.channel.beta = large.beta;
    return draw;
}

// Reorders users (profiles, fading columns, per-user bit groups) by `order`.
ChannelRealization reorder_channel(const ChannelRealization& ch, std::span<const std::size_t> order) {
    ChannelRealization out;
    out.fading.resize(ch.fading.rows(), ch.fading.cols());
    out.beta.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.fading.col(static_cast<Eigen::Index>(i)) = ch.fading.col(static_cast<Eigen::Index>(order[i]));
        out.beta[i] = ch.beta[order[i]];
    }
    return out;
}

BitWord reorder_word(const BitWord& word, std::span<const std::size_t> order, std::size_t group) {
    BitWord out;
    out.bits.resize(word.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = 0; j < group; ++j) {
            out.bits[group * i + j] = word.bits[group * order[i] + j];
        }
    }
    return out;
}

struct ChunkResult {
    std::uint64_t trials = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t failures = 0;
    std::exception_ptr error;
};

ChunkResult run_chunk(const SimConfig& cfg, Scheme scheme, std::size_t antennas,
                      std::uint64_t first, std::uint64_t count) {
    ChunkResult result;
    try {
        for (std::uint64_t b = first; b < first + count; ++b) {
            const auto outcome = simulate_block(cfg, scheme, antennas, b);
            ++result.trials;
            result.bit_errors += outcome.bit_errors;
            result.bits += outcome.bits;
            result.failures += outcome.failure ? 1 : 0;
        }
    } catch (...) {
        result.error = std::current_exception();
    }
    return result;
}

} // namespace

WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t n, double z) {
    if (n == 0) {
        return {0.0, 1.0};
    }
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(errors) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (phat + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {errors == 0 ? 0.0 : std::max(0.0, centre - half),
            errors == n ? 1.0 : std::min(1.0, centre + half)};
}

std::size_t bits_per_block(Scheme scheme, std::size_t users) {
    switch (scheme) {
    case Scheme::Proposed: return 2 * users;
    case Scheme::Med: return users;
    case Scheme::ZfTrain: return ZfBaselineConfig::kBitsPerUser * users;
    }
    return 0;
}

std::size_t slots_per_block(Scheme scheme, std::size_t users) {
    switch (scheme) {
    case Scheme::Proposed: return 2;
    case Scheme::Med: return 1;
    case Scheme::ZfTrain: return ZfBaselineConfig{users}.block_len();
    }
    return 0;
}

BlockOutcome simulate_block(const SimConfig& cfg, Scheme scheme, std::size_t antennas,
                            std::uint64_t block) {
    const auto draw = draw_block(cfg, antennas, block);
    StreamRng noise(cfg.seed, block, StreamRole::Noise);
    StreamRng data(cfg.seed, block, StreamRole::Data);
    const double sigma2 = noise_power(cfg.radio);
    const std::size_t users = cfg.num_users;
    const std::size_t nbits = bits_per_block(scheme, users);
    const BitWord sent = draw_bits(nbits, data);

    BlockOutcome outcome;
    outcome.bits = nbits;
    switch (scheme) {
    case Scheme::Proposed: {
        const auto order = sort_users(draw.profiles);
        const auto sorted = apply_order(draw.profiles, order);
        const auto design = optimal_design(sorted, sigma2);
        const SubConstellationSet set(users, design.d);
        const BitWord word = reorder_word(sent, order, 2);
        const auto tx = assemble_codeword(word, design, sorted, set);
        const auto y = apply_channel(tx.x, reorder_channel(draw.channel, order), sigma2, noise);
        const auto decision = NcmlDetector(design, set, sigma2).detect(RxBlock::from_matrix(y));
        outcome.bit_errors = hamming_distance(decision.word, word);
        break;
    }
    case Scheme::Med: {
        const auto order = sort_users(draw.profiles);
        const auto sorted = apply_order(draw.profiles, order);
        const auto design = med_design(sorted);
        const BitWord word = reorder_word(sent, order, 1);
        const auto y = apply_channel(med_transmit(word, design),
                                     reorder_channel(draw.channel, order), sigma2, noise);
        outcome.bit_errors = hamming_distance(med_detect(y.col(0), design, sigma2), word);
        break;
    }
    case Scheme::ZfTrain: {
        const ZfBaselineConfig zf{users};
        const auto y = apply_channel(zf_transmit(sent, zf, draw.profiles), draw.channel, sigma2, noise);
        try {
            outcome.bit_errors = hamming_distance(zf_train_detect(y, zf, draw.profiles), sent);
        } catch (const DetectionFailure&) {
            outcome.bit_errors = nbits;
            outcome.failure = true;
        }
        break;
    }
    }
    return outcome;
}

BerRecord run_ber_point(const SimConfig& cfg, Scheme scheme, std::size_t antennas,
                        unsigned workers) {
    cfg.validate();
    workers = std::max(1U, workers);

    BerRecord rec;
    rec.scheme = scheme;
    rec.users = cfg.num_users;
    rec.antennas = antennas;
    if (const auto* fixed = std::get_if<FixedDistance>(&cfg.placement)) {
        rec.placement = "fixed";
        rec.radius_m = fixed->meters;
    } else {
        rec.placement = "annulus";
        rec.radius_m = std::get<UniformAnnulus>(cfg.placement).radius_m;
    }
    rec.seed = cfg.seed;
    rec.bits_per_slot_per_user = static_cast<double>(bits_per_block(scheme, cfg.num_users)) /
                                 static_cast<double>(slots_per_block(scheme, cfg.num_users) * cfg.num_users);

    auto target_reached = [&] {
        return cfg.error_target > 0 && rec.bit_errors >= cfg.error_target;
    };

    const std::size_t wave = 2 * static_cast<std::size_t>(workers);
    std::uint64_t next = 0;
    while (next < cfg.trials && !target_reached()) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> chunks;
        for (std::size_t i = 0; i < wave && next < cfg.trials; ++i) {
            const std::uint64_t count = std::min(kChunkBlocks, cfg.trials - next);
            chunks.emplace_back(next, count);
            next += count;
        }
        std::vector<ChunkResult> results(chunks.size());
        if (workers == 1) {
            for (std::size_t i = 0; i < chunks.size(); ++i) {
                results[i] = run_chunk(cfg, scheme, antennas, chunks[i].first, chunks[i].second);
            }
        } else {
            std::atomic<std::size_t> cursor{0};
            std::vector<std::jthread> pool;
            const unsigned threads = std::min<unsigned>(workers, static_cast<unsigned>(chunks.size()));
            for (unsigned t = 0; t < threads; ++t) {
                pool.emplace_back([&] {
                    for (std::size_t i = cursor++; i < chunks.size(); i = cursor++) {
                        results[i] = run_chunk(cfg, scheme, antennas, chunks[i].first, chunks[i].second);
                    }
                });
            }
        }
        // Merge in block order; anything past the stopping chunk is discarded.
        for (const auto& r : results) {
            if (r.error) {
                std::rethrow_exception(r.error);
            }
            rec.trials += r.trials;
            rec.bit_errors += r.bit_errors;
            rec.bits += r.bits;
            rec.failures += r.failures;
            if (target_reached()) {
                break;
            }
        }
    }
    rec.ber = rec.bits > 0 ? static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits) : 0.0;
    rec.ci = wilson_interval(rec.bit_errors, rec.bits);
    return rec;
}

std::vector<BerRecord> run_ber_sweep(const SimConfig& cfg, unsigned workers) {
    cfg.validate();
    std::vector<BerRecord> records;
    for (const auto scheme : cfg.schemes) {
        for (const auto m : cfg.antennas) {
            records.push_back(run_ber_point(cfg, scheme, m, workers));
        }
    }
    return records;
}

} // namespace ncsimo
