#pragma once

// Comparison schemes: one-slot on-off energy signaling with max-min spacing
// of the received energy levels (MED), and a coherent zero-forcing receiver
// fed by a least-squares channel estimate from orthogonal pilots.

#include "ncsimo/linkdesign.hpp"
#include "ncsimo/udcg.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace ncsimo {

/// User k (sorted order) sends 0 or amplitudes[k]; beta_k amplitudes[k]^2 =
/// 2^k delta, so the 2^K noiseless receive energies are {0, delta, ...}.
struct MedDesign {
    double delta = 0.0;
    std::vector<double> levels;
    std::vector<double> amplitudes;

    std::size_t num_users() const { return amplitudes.size(); }
};

/// delta = min_k 2 P_k beta_k / 2^(k-1), the largest spacing keeping every
/// user's average power A_k^2 / 2 within P_k. Profiles must be sorted.
MedDesign med_design(std::span<const UserProfile> profiles);

/// K x 1 transmit column for K on-off bits (bit 1 = on).
Eigen::MatrixXcd med_transmit(const BitWord& bits, const MedDesign& design);

/// Nearest level index of a noise-corrected energy statistic; exact
/// midpoints go to the lower level.
std::size_t med_quantize(double statistic, const MedDesign& design);

/// t = ||y||^2 / M - sigma^2, quantized; the level index in binary gives one
/// bit per user (user 1 least significant).
BitWord med_detect(const Eigen::VectorXcd& y, const MedDesign& design, double sigma2);

struct ZfBaselineConfig {
    std::size_t num_users = 3;

    std::size_t pilot_slots() const { return num_users; }
    std::size_t block_len() const { return num_users + 1; }
    static constexpr std::size_t kBitsPerUser = 6;
};

/// K x K pilots: row u is sqrt(P_u) times row u of the DFT matrix, so every
/// entry has power P_u and X_p X_p^H = K diag(P).
Eigen::MatrixXcd zf_pilot_matrix(const ZfBaselineConfig& cfg,
                                 std::span<const UserProfile> profiles);

/// Unit-energy 64-QAM, three Gray-labelled bits per axis (in-phase first).
Complex qam64_map(std::span<const std::uint8_t> bits);
void qam64_slice(Complex symbol, std::span<std::uint8_t> bits_out);

/// K x (K+1) block: pilots followed by one 64-QAM data slot at power P_u.
/// `word` holds 6 bits per user in user order.
Eigen::MatrixXcd zf_transmit(const BitWord& word, const ZfBaselineConfig& cfg,
                             std::span<const UserProfile> profiles);

/// LS estimate H = Y_p X_p^H (X_p X_p^H)^-1, ZF equalization of the data
/// slot, de-normalization by sqrt(P_u) and per-user slicing. Throws
/// DetectionFailure if the estimate is rank deficient.
BitWord zf_train_detect(const Eigen::MatrixXcd& y, const ZfBaselineConfig& cfg,
                        std::span<const UserProfile> profiles);

} // namespace ncsimo
