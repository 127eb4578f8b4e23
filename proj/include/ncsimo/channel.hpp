#pragma once

// Large-scale gains (log-distance path loss with log-normal shadowing),
// i.i.d. Rayleigh block fading and complex Gaussian noise.

#include "ncsimo/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace ncsimo {

inline constexpr double kSpeedOfLight = 3e8;

struct RadioParams {
    double carrier_hz = 3e9;
    double ref_distance_m = 100.0;
    double pathloss_exponent = 3.71;
    double shadowing_db = 3.16;
    double bandwidth_hz = 2e7;
    double noise_figure_db = 6.0;
    double temperature_k = 290.0;
    double boltzmann = 1.38e-23;

    /// Throws std::invalid_argument naming the first non-positive field.
    void validate() const;
    double wavelength_m() const { return kSpeedOfLight / carrier_hz; }
};

/// 20 log10(lambda / (4 pi d0)) - 10 gamma log10(dist / d0) - psi, in dB.
/// Throws OutOfModelRange for dist < d0.
double path_loss_db(double distance_m, const RadioParams& params, double shadowing_db = 0.0);

/// k0 T0 10^(F0/10) B_w, in watts.
double noise_power(const RadioParams& params);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double linear_to_db(double value);
double watts_to_dbm(double watts);

struct FixedDistance {
    double meters = 0.0;
};

/// Area-uniform placement in the annulus [d0, radius].
struct UniformAnnulus {
    double radius_m = 0.0;
};

using RadiusPolicy = std::variant<FixedDistance, UniformAnnulus>;

struct LargeScaleDraw {
    std::vector<double> distance_m;
    std::vector<double> shadowing_db;
    std::vector<double> beta;
};

/// One placement and one shadowing value per user, from separate streams.
LargeScaleDraw draw_large_scale(std::size_t num_users, const RadiusPolicy& policy,
                                const RadioParams& params, StreamRng& placement_rng,
                                StreamRng& shadowing_rng);

struct ChannelRealization {
    Eigen::MatrixXcd fading;     // M x K, i.i.d. CN(0, 1)
    std::vector<double> beta;    // K large-scale gains
};

/// Draws an M x K matrix of CN(0,1) entries, column by column.
Eigen::MatrixXcd draw_fading(std::size_t num_antennas, std::size_t num_users, StreamRng& rng);

/// Draws rows x cols entries of CN(0, variance).
Eigen::MatrixXcd draw_complex_gaussian(std::size_t rows, std::size_t cols, double variance,
                                       StreamRng& rng);

/// Y = G D^(1/2) X + noise with CN(0, sigma2) noise entries. X is K x T and
/// the realization is held fixed over all T slots.
Eigen::MatrixXcd apply_channel(const Eigen::MatrixXcd& tx, const ChannelRealization& channel,
                               double sigma2, StreamRng& noise_rng);

} // namespace ncsimo
