#include <doctest.h>

#include "ncsimo/baselines.hpp"
#include "ncsimo/channel.hpp"
#include "ncsimo/errors.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace ncsimo;

namespace {

BitWord random_bits(std::size_t n, std::mt19937_64& gen) {
    std::bernoulli_distribution coin(0.5);
    BitWord w;
    for (std::size_t i = 0; i < n; ++i) {
        w.bits.push_back(coin(gen) ? 1 : 0);
    }
    return w;
}

std::vector<std::uint8_t> bits_of(unsigned value, std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (value >> (n - 1 - i)) & 1U;
    }
    return out;
}

} // namespace

TEST_CASE("MED design examples") {
    const std::vector<UserProfile> one{{1.0, 1.0}};
    const auto d1 = med_design(one);
    CHECK(d1.delta == doctest::Approx(2.0));
    REQUIRE(d1.levels.size() == 2);
    CHECK(d1.levels[0] == 0.0);
    CHECK(d1.levels[1] == doctest::Approx(2.0));
    // On energy 2, average over the on-off duty cycle equals the budget.
    CHECK(one[0].beta * d1.amplitudes[0] * d1.amplitudes[0] == doctest::Approx(2.0));
    CHECK(d1.amplitudes[0] * d1.amplitudes[0] / 2.0 == doctest::Approx(one[0].power));

    const std::vector<UserProfile> two{{1.0, 1.0}, {2.0, 1.0}};
    const auto d2 = med_design(two);
    CHECK(d2.delta == doctest::Approx(2.0));
    REQUIRE(d2.levels.size() == 4);
    for (std::size_t m = 0; m < 4; ++m) {
        CHECK(d2.levels[m] == doctest::Approx(2.0 * static_cast<double>(m)));
    }
}

TEST_CASE("MED levels are a uniform grid and respect the budgets") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> log_budget(-2.0, 2.0);
    for (std::size_t users = 1; users <= 5; ++users) {
        std::vector<UserProfile> profiles(users);
        for (auto& p : profiles) {
            p = {std::pow(10.0, log_budget(gen)), std::pow(10.0, log_budget(gen))};
        }
        std::sort(profiles.begin(), profiles.end(),
                  [](const auto& l, const auto& r) { return l.link_budget() < r.link_budget(); });
        const auto design = med_design(profiles);
        REQUIRE(design.levels.size() == (std::size_t{1} << users));
        for (std::size_t m = 1; m < design.levels.size(); ++m) {
            CHECK(design.levels[m] - design.levels[m - 1] ==
                  doctest::Approx(design.delta).epsilon(1e-12));
        }
        bool tight = false;
        for (std::size_t k = 0; k < users; ++k) {
            const double average = design.amplitudes[k] * design.amplitudes[k] / 2.0;
            CHECK(average <= profiles[k].power * (1.0 + 1e-12));
            tight = tight || std::abs(average - profiles[k].power) <= 1e-12 * profiles[k].power;
            CHECK(profiles[k].beta * design.amplitudes[k] * design.amplitudes[k] ==
                  doctest::Approx(std::ldexp(design.delta, static_cast<int>(k))));
        }
        CHECK(tight);
    }
}

TEST_CASE("MED rejects unsorted profiles") {
    const std::vector<UserProfile> unsorted{{2.0, 1.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(med_design(unsorted), std::invalid_argument);
}

TEST_CASE("MED quantizer") {
    const std::vector<UserProfile> two{{1.0, 1.0}, {2.0, 1.0}};
    const auto design = med_design(two);
    const double sigma2 = 0.25;
    for (std::size_t m = 0; m < 4; ++m) {
        CHECK(med_quantize(design.levels[m], design) == m);
        // An observation whose energy is exactly level m plus the noise floor.
        const Eigen::VectorXcd y =
            Eigen::VectorXcd::Constant(16, std::sqrt(design.levels[m] + sigma2));
        const auto word = med_detect(y, design, sigma2);
        CHECK(word.bits == std::vector<std::uint8_t>{static_cast<std::uint8_t>(m & 1U),
                                                     static_cast<std::uint8_t>((m >> 1) & 1U)});
    }
    CHECK(med_quantize(1.0, design) == 0);
    CHECK(med_quantize(3.0, design) == 1);
    CHECK(med_quantize(5.0, design) == 2);
    CHECK(med_quantize(1.0 + 1e-9, design) == 1);
    CHECK(med_quantize(-4.0, design) == 0);
    CHECK(med_quantize(100.0, design) == 3);
}

TEST_CASE("MED transmit and receive through the channel") {
    const std::vector<UserProfile> one{{1.0, 1.0}};
    const auto design = med_design(one);
    const double sigma2 = 0.01;
    std::mt19937_64 gen(43);
    std::size_t errors = 0;
    constexpr int trials = 10000;
    for (int block = 0; block < trials; ++block) {
        const auto bits = random_bits(1, gen);
        const auto x = med_transmit(bits, design);
        StreamRng fading(21, block, StreamRole::Fading);
        StreamRng noise(21, block, StreamRole::Noise);
        const ChannelRealization ch{draw_fading(256, 1, fading), {1.0}};
        const auto y = apply_channel(x, ch, sigma2, noise);
        errors += med_detect(y.col(0), design, sigma2) == bits ? 0 : 1;
    }
    CHECK(static_cast<double>(errors) / trials < 1e-3);
}

TEST_CASE("64-QAM mapping") {
    std::set<std::pair<double, double>> seen;
    double energy = 0.0;
    double min_dist = std::numeric_limits<double>::infinity();
    std::vector<Complex> points;
    for (unsigned v = 0; v < 64; ++v) {
        const auto bits = bits_of(v, 6);
        const Complex s = qam64_map(bits);
        points.push_back(s);
        seen.insert({s.real(), s.imag()});
        energy += std::norm(s);
        std::vector<std::uint8_t> back(6);
        qam64_slice(s, back);
        CHECK(back == bits);
        // Small perturbations still slice back.
        qam64_slice(s + Complex{0.05, -0.05}, back);
        CHECK(back == bits);
    }
    CHECK(seen.size() == 64);
    CHECK(energy / 64.0 == doctest::Approx(1.0));
    for (std::size_t i = 0; i < 64; ++i) {
        for (std::size_t j = i + 1; j < 64; ++j) {
            const double dist = std::abs(points[i] - points[j]);
            min_dist = std::min(min_dist, dist);
            // Gray labelling: nearest neighbours differ in exactly one bit.
            if (dist < 2.0 / std::sqrt(42.0) + 1e-9) {
                const auto bi = bits_of(static_cast<unsigned>(i), 6);
                const auto bj = bits_of(static_cast<unsigned>(j), 6);
                std::size_t diff = 0;
                for (std::size_t b = 0; b < 6; ++b) {
                    diff += bi[b] != bj[b] ? 1 : 0;
                }
                CHECK(diff == 1);
            }
        }
    }
    CHECK(min_dist == doctest::Approx(2.0 / std::sqrt(42.0)));
    CHECK_THROWS_AS(qam64_map(std::vector<std::uint8_t>(5)), std::invalid_argument);
}

TEST_CASE("ZF pilots are orthogonal with per-user power") {
    const ZfBaselineConfig cfg;
    const std::vector<UserProfile> profiles{{0.5, 1e-9}, {1.0, 2e-9}, {3.0, 1e-8}};
    const auto pilots = zf_pilot_matrix(cfg, profiles);
    REQUIRE(pilots.rows() == 3);
    REQUIRE(pilots.cols() == 3);
    const Eigen::MatrixXcd gram = pilots * pilots.adjoint();
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            if (i == j) {
                CHECK(gram(i, j).real() == doctest::Approx(3.0 * profiles[i].power));
            } else {
                CHECK(std::abs(gram(i, j)) < 1e-12);
            }
        }
        for (Eigen::Index t = 0; t < 3; ++t) {
            CHECK(std::norm(pilots(i, t)) == doctest::Approx(profiles[i].power));
        }
    }
    CHECK(cfg.block_len() == 4);
}

TEST_CASE("ZF data slot meets the average power budget") {
    const ZfBaselineConfig cfg;
    const std::vector<UserProfile> profiles{{0.5, 1.0}, {1.0, 1.0}, {3.0, 1.0}};
    std::vector<double> energy(3, 0.0);
    for (unsigned v = 0; v < 64; ++v) {
        BitWord word;
        for (int u = 0; u < 3; ++u) {
            const auto b = bits_of(v, 6);
            word.bits.insert(word.bits.end(), b.begin(), b.end());
        }
        const auto x = zf_transmit(word, cfg, profiles);
        REQUIRE(x.cols() == 4);
        for (std::size_t u = 0; u < 3; ++u) {
            energy[u] += std::norm(x(static_cast<Eigen::Index>(u), 3)) / 64.0;
        }
    }
    for (std::size_t u = 0; u < 3; ++u) {
        CHECK(energy[u] == doctest::Approx(profiles[u].power));
    }
}

TEST_CASE("ZF with a noiseless channel recovers every bit") {
    const ZfBaselineConfig cfg;
    const std::vector<UserProfile> profiles{{0.3, 2e-10}, {0.3, 5e-10}, {0.3, 4e-9}};
    const std::vector<double> beta{2e-10, 5e-10, 4e-9};
    std::mt19937_64 gen(47);
    for (int block = 0; block < 200; ++block) {
        const auto word = random_bits(18, gen);
        const auto x = zf_transmit(word, cfg, profiles);
        StreamRng fading(22, block, StreamRole::Fading);
        StreamRng noise(22, block, StreamRole::Noise);
        const ChannelRealization ch{draw_fading(8, 3, fading), beta};
        const auto y = apply_channel(x, ch, 0.0, noise);
        CHECK(zf_train_detect(y, cfg, profiles) == word);
    }
}

TEST_CASE("ZF works for other user counts") {
    const ZfBaselineConfig cfg{2};
    const std::vector<UserProfile> profiles{{1.0, 1.0}, {1.0, 1.0}};
    std::mt19937_64 gen(53);
    const auto word = random_bits(12, gen);
    const auto x = zf_transmit(word, cfg, profiles);
    REQUIRE(x.cols() == 3);
    StreamRng fading(23, 0, StreamRole::Fading);
    StreamRng noise(23, 0, StreamRole::Noise);
    const ChannelRealization ch{draw_fading(4, 2, fading), {1.0, 1.0}};
    CHECK(zf_train_detect(apply_channel(x, ch, 0.0, noise), cfg, profiles) == word);
}

TEST_CASE("ZF reports a rank-deficient channel estimate") {
    const ZfBaselineConfig cfg;
    const std::vector<UserProfile> profiles{{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
    const auto x = zf_transmit(BitWord{std::vector<std::uint8_t>(18, 0)}, cfg, profiles);
    StreamRng fading(24, 0, StreamRole::Fading);
    StreamRng noise(24, 0, StreamRole::Noise);
    Eigen::MatrixXcd g = draw_fading(8, 3, fading);
    g.col(2) = g.col(0);
    const ChannelRealization ch{g, {1.0, 1.0, 1.0}};
    CHECK_THROWS_AS(zf_train_detect(apply_channel(x, ch, 0.0, noise), cfg, profiles),
                    DetectionFailure);
    CHECK_THROWS_AS(zf_train_detect(Eigen::MatrixXcd::Zero(2, 4), cfg, profiles),
                    std::invalid_argument);
}
