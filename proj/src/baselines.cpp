#include "ncsimo/baselines.hpp"

#include "ncsimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ncsimo {

namespace {

// Mean energy of the {±1, ±3, ±5, ±7}^2 grid.
const double kQam64Scale = std::sqrt(42.0);

unsigned gray_decode(unsigned g) {
    unsigned n = g;
    for (unsigned shift = 1; shift < 8; shift <<= 1) {
        n ^= n >> shift;
    }
    return n;
}

double pam8_map(std::uint8_t b0, std::uint8_t b1, std::uint8_t b2) {
    const unsigned gray = (unsigned{b0} << 2) | (unsigned{b1} << 1) | unsigned{b2};
    return 2.0 * static_cast<double>(gray_decode(gray)) - 7.0;
}

void pam8_slice(double amplitude, std::uint8_t* bits) {
    const double idx = std::clamp(std::round((amplitude + 7.0) / 2.0), 0.0, 7.0);
    const unsigned n = static_cast<unsigned>(idx);
    const unsigned gray = n ^ (n >> 1);
    bits[0] = (gray >> 2) & 1U;
    bits[1] = (gray >> 1) & 1U;
    bits[2] = gray & 1U;
}

void require_sorted(std::span<const UserProfile> profiles) {
    if (profiles.empty()) {
        throw std::invalid_argument("at least one user profile is required");
    }
    for (std::size_t u = 0; u < profiles.size(); ++u) {
        if (!(profiles[u].link_budget() > 0.0)) {
            throw std::invalid_argument("power and beta must be positive");
        }
        if (u > 0 && profiles[u].link_budget() < profiles[u - 1].link_budget()) {
            throw std::invalid_argument("profiles must be sorted by P*beta");
        }
    }
}

} // namespace

MedDesign med_design(std::span<const UserProfile> profiles) {
    require_sorted(profiles);
    const std::size_t users = profiles.size();
    if (users > 20) {
        throw UnsupportedSize("MED design supports at most 20 users");
    }
    MedDesign design;
    design.delta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < users; ++k) {
        const double cap = 2.0 * profiles[k].link_budget() / std::ldexp(1.0, static_cast<int>(k));
        design.delta = std::min(design.delta, cap);
    }
    const std::size_t count = std::size_t{1} << users;
    design.levels.resize(count);
    for (std::size_t m = 0; m < count; ++m) {
        design.levels[m] = static_cast<double>(m) * design.delta;
    }
    design.amplitudes.resize(users);
    for (std::size_t k = 0; k < users; ++k) {
        design.amplitudes[k] =
            std::sqrt(std::ldexp(design.delta, static_cast<int>(k)) / profiles[k].beta);
    }
    return design;
}

Eigen::MatrixXcd med_transmit(const BitWord& bits, const MedDesign& design) {
    if (bits.size() != design.num_users()) {
        throw std::invalid_argument("MED word must carry one bit per user");
    }
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(bits.size()), 1);
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits.bits[k] != 0) {
            x(static_cast<Eigen::Index>(k), 0) = design.amplitudes[k];
        }
    }
    return x;
}

std::size_t med_quantize(double statistic, const MedDesign& design) {
    const double top = static_cast<double>(design.levels.size() - 1);
    // ceil(v - 1/2) is the nearest integer with halves rounded down.
    const double v = std::ceil(statistic / design.delta - 0.5);
    return static_cast<std::size_t>(std::clamp(v, 0.0, top));
}

BitWord med_detect(const Eigen::VectorXcd& y, const MedDesign& design, double sigma2) {
    if (y.size() == 0) {
        throw std::invalid_argument("receive vector must be nonempty");
    }
    const double t = y.squaredNorm() / static_cast<double>(y.size()) - sigma2;
    const std::size_t level = med_quantize(t, design);
    BitWord word;
    word.bits.resize(design.num_users());
    for (std::size_t k = 0; k < word.size(); ++k) {
        word.bits[k] = (level >> k) & 1U;
    }
    return word;
}

Eigen::MatrixXcd zf_pilot_matrix(const ZfBaselineConfig& cfg,
                                 std::span<const UserProfile> profiles) {
    const std::size_t users = cfg.num_users;
    if (profiles.size() != users || users == 0) {
        throw std::invalid_argument("one profile per user expected");
    }
    Eigen::MatrixXcd pilots(static_cast<Eigen::Index>(users), static_cast<Eigen::Index>(users));
    for (std::size_t u = 0; u < users; ++u) {
        const double amp = std::sqrt(profiles[u].power);
        for (std::size_t t = 0; t < users; ++t) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>(u * t) /
                                 static_cast<double>(users);
            pilots(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(t)) =
                std::polar(amp, phase);
        }
    }
    return pilots;
}

Complex qam64_map(std::span<const std::uint8_t> bits) {
    if (bits.size() != 6) {
        throw std::invalid_argument("64-QAM symbol needs 6 bits");
    }
    return Complex{pam8_map(bits[0], bits[1], bits[2]), pam8_map(bits[3], bits[4], bits[5])} /
           kQam64Scale;
}

void qam64_slice(Complex symbol, std::span<std::uint8_t> bits_out) {
    if (bits_out.size() != 6) {
        throw std::invalid_argument("64-QAM symbol needs 6 bits");
    }
    pam8_slice(symbol.real() * kQam64Scale, bits_out.data());
    pam8_slice(symbol.imag() * kQam64Scale, bits_out.data() + 3);
}

Eigen::MatrixXcd zf_transmit(const BitWord& word, const ZfBaselineConfig& cfg,
                             std::span<const UserProfile> profiles) {
    constexpr std::size_t bpu = ZfBaselineConfig::kBitsPerUser;
    if (word.size() != bpu * cfg.num_users) {
        throw std::invalid_argument("ZF word must carry 6 bits per user");
    }
    const auto users = static_cast<Eigen::Index>(cfg.num_users);
    Eigen::MatrixXcd x(users, static_cast<Eigen::Index>(cfg.block_len()));
    x.leftCols(users) = zf_pilot_matrix(cfg, profiles);
    const std::span<const std::uint8_t> bits(word.bits);
    for (std::size_t u = 0; u < cfg.num_users; ++u) {
        x(static_cast<Eigen::Index>(u), users) =
            std::sqrt(profiles[u].power) * qam64_map(bits.subspan(bpu * u, bpu));
    }
    return x;
}

BitWord zf_train_detect(const Eigen::MatrixXcd& y, const ZfBaselineConfig& cfg,
                        std::span<const UserProfile> profiles) {
    const auto users = static_cast<Eigen::Index>(cfg.num_users);
    if (y.cols() != static_cast<Eigen::Index>(cfg.block_len()) || y.rows() < users) {
        throw std::invalid_argument("ZF receive block must be M x (K+1) with M >= K");
    }
    const Eigen::MatrixXcd pilots = zf_pilot_matrix(cfg, profiles);
    const Eigen::MatrixXcd pilot_gram = pilots * pilots.adjoint();
    const Eigen::MatrixXcd h_est =
        y.leftCols(users) * pilots.adjoint() * pilot_gram.inverse();

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(h_est);
    if (qr.rank() < users) {
        throw DetectionFailure("LS channel estimate is rank deficient");
    }
    // Least-squares solve, i.e. (H^H H)^-1 H^H y for full column rank.
    const Eigen::VectorXcd x_est = qr.solve(y.col(users));

    constexpr std::size_t bpu = ZfBaselineConfig::kBitsPerUser;
    BitWord word;
    word.bits.resize(bpu * cfg.num_users);
    const std::span<std::uint8_t> bits(word.bits);
    for (std::size_t u = 0; u < cfg.num_users; ++u) {
        const Complex symbol = x_est(static_cast<Eigen::Index>(u)) / std::sqrt(profiles[u].power);
        qam64_slice(symbol, bits.subspan(bpu * u, bpu));
    }
    return word;
}

} // namespace ncsimo
