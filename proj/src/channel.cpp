#include "ncsimo/channel.hpp"

#include "ncsimo/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace ncsimo {

void RadioParams::validate() const {
    const std::pair<const char*, double> fields[] = {
        {"carrier_hz", carrier_hz},
        {"ref_distance_m", ref_distance_m},
        {"pathloss_exponent", pathloss_exponent},
        {"bandwidth_hz", bandwidth_hz},
        {"temperature_k", temperature_k},
        {"boltzmann", boltzmann},
    };
    for (const auto& [name, value] : fields) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw std::invalid_argument(std::string("radio parameter '") + name +
                                        "' must be positive");
        }
    }
    if (shadowing_db < 0.0) {
        throw std::invalid_argument("radio parameter 'shadowing_db' must be nonnegative");
    }
    if (!std::isfinite(noise_figure_db)) {
        throw std::invalid_argument("radio parameter 'noise_figure_db' must be finite");
    }
}

double path_loss_db(double distance_m, const RadioParams& params, double shadowing_db) {
    if (!(distance_m >= params.ref_distance_m)) {
        throw OutOfModelRange("distance " + std::to_string(distance_m) +
                              " m is below the reference distance " +
                              std::to_string(params.ref_distance_m) + " m");
    }
    const double d0 = params.ref_distance_m;
    return 20.0 * std::log10(params.wavelength_m() / (4.0 * std::numbers::pi * d0)) -
           10.0 * params.pathloss_exponent * std::log10(distance_m / d0) - shadowing_db;
}

double noise_power(const RadioParams& params) {
    return params.boltzmann * params.temperature_k * db_to_linear(params.noise_figure_db) *
           params.bandwidth_hz;
}

double linear_to_db(double value) { return 10.0 * std::log10(value); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

LargeScaleDraw draw_large_scale(std::size_t num_users, const RadiusPolicy& policy,
                                const RadioParams& params, StreamRng& placement_rng,
                                StreamRng& shadowing_rng) {
    LargeScaleDraw draw;
    draw.distance_m.resize(num_users);
    draw.shadowing_db.resize(num_users);
    draw.beta.resize(num_users);

    const double d0 = params.ref_distance_m;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> shadow(0.0, 1.0);
    for (std::size_t u = 0; u < num_users; ++u) {
        if (const auto* fixed = std::get_if<FixedDistance>(&policy)) {
            draw.distance_m[u] = fixed->meters;
        } else {
            const double radius = std::get<UniformAnnulus>(policy).radius_m;
            if (radius < d0) {
                throw std::invalid_argument("cell radius must be at least the reference distance");
            }
            // Inverse CDF of r for density proportional to r on [d0, R].
            const double v = unit(placement_rng);
            draw.distance_m[u] = std::sqrt(d0 * d0 + v * (radius * radius - d0 * d0));
        }
        draw.shadowing_db[u] = params.shadowing_db * shadow(shadowing_rng);
        draw.beta[u] = db_to_linear(path_loss_db(draw.distance_m[u], params, draw.shadowing_db[u]));
    }
    return draw;
}

Eigen::MatrixXcd draw_complex_gaussian(std::size_t rows, std::size_t cols, double variance,
                                       StreamRng& rng) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            out(r, c) = {re, im};
        }
    }
    return out;
}

Eigen::MatrixXcd draw_fading(std::size_t num_antennas, std::size_t num_users, StreamRng& rng) {
    return draw_complex_gaussian(num_antennas, num_users, 1.0, rng);
}

Eigen::MatrixXcd apply_channel(const Eigen::MatrixXcd& tx, const ChannelRealization& channel,
                               double sigma2, StreamRng& noise_rng) {
    const auto users = channel.fading.cols();
    if (tx.rows() != users || static_cast<Eigen::Index>(channel.beta.size()) != users) {
        throw std::invalid_argument("apply_channel: dimension mismatch between X, G and D");
    }
    if (sigma2 < 0.0) {
        throw std::invalid_argument("apply_channel: noise power must be nonnegative");
    }
    Eigen::VectorXd amplitude(users);
    for (Eigen::Index k = 0; k < users; ++k) {
        amplitude(k) = std::sqrt(channel.beta[static_cast<std::size_t>(k)]);
    }
    Eigen::MatrixXcd rx = channel.fading * (amplitude.asDiagonal() * tx);
    if (sigma2 > 0.0) {
        rx += draw_complex_gaussian(static_cast<std::size_t>(rx.rows()),
                                    static_cast<std::size_t>(rx.cols()), sigma2, noise_rng);
    }
    return rx;
}

} // namespace ncsimo
