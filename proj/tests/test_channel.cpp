#include <doctest.h>

#include "ncsimo/channel.hpp"
#include "ncsimo/errors.hpp"
#include "ncsimo/udcg.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>

using namespace ncsimo;

TEST_CASE("path loss at the reference distance and one decade out") {
    const RadioParams params;
    CHECK(params.wavelength_m() == doctest::Approx(0.1));
    CHECK(path_loss_db(100.0, params) == doctest::Approx(-81.984).epsilon(1e-4));
    CHECK(path_loss_db(1000.0, params) == doctest::Approx(-81.984 - 37.1).epsilon(1e-4));
    CHECK(path_loss_db(100.0, params, 3.0) == doctest::Approx(path_loss_db(100.0, params) - 3.0));
    CHECK_THROWS_AS(path_loss_db(50.0, params), OutOfModelRange);
}

TEST_CASE("thermal noise power") {
    RadioParams params;
    CHECK(noise_power(params) == doctest::Approx(3.187e-13).epsilon(1e-3));
    params.noise_figure_db = 0.0;
    CHECK(noise_power(params) == doctest::Approx(8.004e-14).epsilon(1e-3));
    const double base = noise_power(params);
    params.bandwidth_hz *= 2.0;
    CHECK(noise_power(params) == doctest::Approx(2.0 * base).epsilon(1e-15));
}

TEST_CASE("unit conversions") {
    CHECK(dbm_to_watts(25.0) == doctest::Approx(0.316228).epsilon(1e-5));
    CHECK(watts_to_dbm(1.0) == doctest::Approx(30.0));
    CHECK(db_to_linear(-3.0) == doctest::Approx(0.501187).epsilon(1e-5));
    CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
}

TEST_CASE("fixed distance without shadowing") {
    RadioParams params;
    params.shadowing_db = 0.0;
    StreamRng place(1, 0, StreamRole::Placement);
    StreamRng shadow(1, 0, StreamRole::Shadowing);
    const auto draw = draw_large_scale(4, FixedDistance{100.0}, params, place, shadow);
    for (const double b : draw.beta) {
        CHECK(b == doctest::Approx(6.334e-9).epsilon(1e-3));
    }
}

TEST_CASE("area-uniform placement in the annulus") {
    const RadioParams params;
    StreamRng place(2, 0, StreamRole::Placement);
    StreamRng shadow(2, 0, StreamRole::Shadowing);
    constexpr std::size_t n = 100000;
    const double radius = 1000.0;
    const auto draw = draw_large_scale(n, UniformAnnulus{radius}, params, place, shadow);
    const double mean = std::accumulate(draw.distance_m.begin(), draw.distance_m.end(), 0.0) / n;

    // Exact annulus mean 2/3 (R^3 - d0^3)/(R^2 - d0^2), checked at 4 standard errors.
    const double d0 = params.ref_distance_m;
    const double exact = 2.0 / 3.0 * (std::pow(radius, 3) - std::pow(d0, 3)) /
                         (radius * radius - d0 * d0);
    double var = 0.0;
    for (const double x : draw.distance_m) {
        var += (x - mean) * (x - mean);
        REQUIRE(x >= d0);
        REQUIRE(x <= radius);
    }
    const double se = std::sqrt(var / (n - 1) / n);
    CHECK(std::abs(mean - exact) < 4.0 * se);

    // Half the users fall beyond the radius enclosing half the annulus area.
    const double median_r = std::sqrt((radius * radius + d0 * d0) / 2.0);
    const auto outside = std::count_if(draw.distance_m.begin(), draw.distance_m.end(),
                                       [&](double x) { return x > median_r; });
    CHECK(std::abs(static_cast<double>(outside) / n - 0.5) < 0.01);
}

TEST_CASE("placement approaches the full-disk mean as the exclusion zone shrinks") {
    RadioParams params;
    params.ref_distance_m = 1.0;
    StreamRng place(2, 1, StreamRole::Placement);
    StreamRng shadow(2, 1, StreamRole::Shadowing);
    constexpr std::size_t n = 100000;
    const double radius = 1000.0;
    const auto draw = draw_large_scale(n, UniformAnnulus{radius}, params, place, shadow);
    const double mean = std::accumulate(draw.distance_m.begin(), draw.distance_m.end(), 0.0) / n;
    CHECK(std::abs(mean - 2.0 * radius / 3.0) < 0.01 * 2.0 * radius / 3.0);
}

TEST_CASE("log-normal shadowing spread") {
    const RadioParams params;
    StreamRng place(3, 0, StreamRole::Placement);
    StreamRng shadow(3, 0, StreamRole::Shadowing);
    constexpr std::size_t n = 100000;
    const auto draw = draw_large_scale(n, UniformAnnulus{1000.0}, params, place, shadow);
    double sum = 0.0;
    double sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double residual =
            std::log10(draw.beta[i]) - path_loss_db(draw.distance_m[i], params) / 10.0;
        sum += residual;
        sum2 += residual * residual;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum2 / n - mean * mean);
    CHECK(sd == doctest::Approx(0.316).epsilon(0.02));
    CHECK(std::abs(mean) < 0.005);
}

TEST_CASE("noise-free deterministic channel") {
    ChannelRealization ch;
    ch.fading = Eigen::MatrixXcd::Ones(8, 1);
    ch.beta = {1.0};
    Eigen::MatrixXcd x(1, 2);
    x << 1.0, 1.0;
    StreamRng noise(4, 0, StreamRole::Noise);
    const auto y = apply_channel(x, ch, 0.0, noise);
    CHECK(y.rows() == 8);
    CHECK(y.cols() == 2);
    CHECK((y - Eigen::MatrixXcd::Ones(8, 2)).norm() == 0.0);
}

TEST_CASE("fading is held over all slots of a block") {
    StreamRng fading(5, 0, StreamRole::Fading);
    StreamRng noise(5, 0, StreamRole::Noise);
    ChannelRealization ch{draw_fading(16, 3, fading), {0.5, 1.0, 2.0}};
    Eigen::MatrixXcd x(3, 4);
    x.col(0) << Complex{1, 2}, Complex{0, -1}, Complex{3, 0};
    for (int t = 1; t < 4; ++t) {
        x.col(t) = x.col(0);
    }
    const auto y = apply_channel(x, ch, 0.0, noise);
    for (int t = 1; t < 4; ++t) {
        CHECK((y.col(t) - y.col(0)).norm() == 0.0);
    }
}

TEST_CASE("dimension mismatch is rejected") {
    ChannelRealization ch{Eigen::MatrixXcd::Ones(4, 2), {1.0, 1.0}};
    StreamRng noise(6, 0, StreamRole::Noise);
    CHECK_THROWS_AS(apply_channel(Eigen::MatrixXcd::Ones(3, 2), ch, 1.0, noise), std::invalid_argument);
    ch.beta = {1.0};
    CHECK_THROWS_AS(apply_channel(Eigen::MatrixXcd::Ones(2, 2), ch, 1.0, noise), std::invalid_argument);
}

TEST_CASE("received energy matches the large-scale budget on average") {
    const std::vector<double> beta{0.5, 2.0};
    Eigen::MatrixXcd x(2, 2);
    x << Complex{1, 0}, Complex{0, 2}, Complex{-1, 1}, Complex{0.5, 0};
    const std::size_t m = 16;
    constexpr int draws = 10000;
    double e1 = 0.0;
    double e2 = 0.0;
    for (int b = 0; b < draws; ++b) {
        StreamRng fading(7, b, StreamRole::Fading);
        StreamRng noise(7, b, StreamRole::Noise);
        ChannelRealization ch{draw_fading(m, 2, fading), beta};
        const auto y = apply_channel(x, ch, 0.0, noise);
        e1 += y.col(0).squaredNorm() / m;
        e2 += y.col(1).squaredNorm() / m;
    }
    const double expect1 = 0.5 * 1.0 + 2.0 * 2.0;
    const double expect2 = 0.5 * 4.0 + 2.0 * 0.25;
    CHECK(e1 / draws == doctest::Approx(expect1).epsilon(0.02));
    CHECK(e2 / draws == doctest::Approx(expect2).epsilon(0.02));
}

TEST_CASE("noise-only blocks: total energy and circular symmetry") {
    const std::size_t m = 8;
    const double sigma2 = 0.7;
    constexpr int draws = 10000;
    ChannelRealization ch{Eigen::MatrixXcd::Ones(m, 1), {1.0}};
    const Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(1, 2);
    double total = 0.0;
    double re2 = 0.0;
    double im2 = 0.0;
    double reim = 0.0;
    for (int b = 0; b < draws; ++b) {
        StreamRng noise(8, b, StreamRole::Noise);
        const auto y = apply_channel(x, ch, sigma2, noise);
        total += y.squaredNorm();
        re2 += y.real().squaredNorm();
        im2 += y.imag().squaredNorm();
        reim += (y.real().array() * y.imag().array()).sum();
    }
    const double entries = static_cast<double>(draws) * m * 2;
    CHECK(total / draws == doctest::Approx(2.0 * m * sigma2).epsilon(0.02));
    CHECK(re2 / entries == doctest::Approx(sigma2 / 2.0).epsilon(0.02));
    CHECK(im2 / entries == doctest::Approx(sigma2 / 2.0).epsilon(0.02));
    CHECK(std::abs(reim / entries) < 0.02 * sigma2 / 2.0);
}

TEST_CASE("fading entries have unit variance") {
    StreamRng fading(9, 0, StreamRole::Fading);
    const auto g = draw_fading(1000, 100, fading);
    CHECK(g.squaredNorm() / g.size() == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(g.mean()) < 0.01);
}

TEST_CASE("identical stream keys give bit-identical channels") {
    StreamRng a(10, 3, StreamRole::Fading);
    StreamRng b(10, 3, StreamRole::Fading);
    CHECK(draw_fading(32, 3, a) == draw_fading(32, 3, b));
}

TEST_CASE("radio parameter validation") {
    RadioParams params;
    CHECK_NOTHROW(params.validate());
    params.shadowing_db = 0.0;
    CHECK_NOTHROW(params.validate());
    params.shadowing_db = -1.0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params = RadioParams{};
    params.ref_distance_m = 0.0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}
