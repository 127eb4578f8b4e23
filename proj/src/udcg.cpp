#include "ncsimo/udcg.hpp"

#include "ncsimo/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ncsimo {

namespace {

constexpr double kGridTolerance = 1e-9;

// Sum constellations beyond 4^16 points do not fit any sensible use.
constexpr std::size_t kMaxLevels = 16;

// Scaled coordinate v = 2x/d must be an odd integer with |v| <= 2^K - 1.
bool on_grid(double coordinate, double d, std::size_t num_levels) {
    const double v = 2.0 * coordinate / d;
    const double odd = 2.0 * std::floor(v / 2.0) + 1.0;
    if (std::abs(v - odd) > 2.0 * kGridTolerance) {
        return false;
    }
    const double limit = std::ldexp(1.0, static_cast<int>(num_levels)) - 1.0;
    return std::abs(odd) <= limit;
}

} // namespace

std::size_t hamming_distance(const BitWord& lhs, const BitWord& rhs) {
    if (lhs.size() != rhs.size()) {
        throw std::invalid_argument("hamming_distance: word lengths differ");
    }
    std::size_t n = 0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        n += (lhs.bits[i] != rhs.bits[i]) ? 1 : 0;
    }
    return n;
}

SubConstellationSet::SubConstellationSet(std::size_t num_levels, double min_distance)
    : num_levels_(num_levels), min_distance_(min_distance) {
    if (num_levels == 0 || num_levels > kMaxLevels) {
        throw std::invalid_argument("sub-constellation count must be in [1, 16], got " +
                                    std::to_string(num_levels));
    }
    if (!(min_distance > 0.0) || !std::isfinite(min_distance)) {
        throw std::invalid_argument("minimum distance must be positive and finite");
    }
    subsets_.reserve(4 * num_levels);
    for (std::size_t k = 0; k < num_levels; ++k) {
        for (unsigned sym = 0; sym < 4; ++sym) {
            subsets_.push_back(level_point(k, (sym & 2U) != 0, (sym & 1U) != 0));
        }
    }
    const std::size_t count = std::size_t{1} << (2 * num_levels);
    sum_points_.resize(count);
    for (std::size_t index = 0; index < count; ++index) {
        Complex sum{0.0, 0.0};
        std::size_t rest = index;
        for (std::size_t k = 0; k < num_levels; ++k) {
            sum += subsets_[4 * k + (rest & 3U)];
            rest >>= 2;
        }
        sum_points_[index] = sum;
    }
}

std::span<const Complex> SubConstellationSet::subset(std::size_t level) const {
    if (level >= num_levels_) {
        throw std::out_of_range("level out of range");
    }
    return std::span<const Complex>(subsets_).subspan(4 * level, 4);
}

double SubConstellationSet::level_energy(std::size_t level) {
    return std::ldexp(1.0, 2 * static_cast<int>(level) - 1);
}

Complex SubConstellationSet::level_point(std::size_t level, bool negative_re,
                                         bool negative_im) const {
    // (±1/2 ± j/2) 2^(k-1) d with 1-based k, i.e. half-side 2^(level-1) d.
    const double half = std::ldexp(min_distance_, static_cast<int>(level) - 1);
    return {negative_re ? -half : half, negative_im ? -half : half};
}

SubConstellationSet build_sub_constellations(std::size_t num_levels, double min_distance) {
    return SubConstellationSet(num_levels, min_distance);
}

std::vector<std::size_t> decompose_indices(Complex point, const SubConstellationSet& set) {
    const double d = set.min_distance();
    const std::size_t levels = set.num_levels();
    if (!on_grid(point.real(), d, levels) || !on_grid(point.imag(), d, levels)) {
        throw NotAConstellationPoint("point is not on the sum-constellation grid");
    }
    std::vector<std::size_t> indices(levels);
    Complex residual = point;
    for (std::size_t k = levels; k-- > 0;) {
        const bool neg_re = residual.real() < 0.0;
        const bool neg_im = residual.imag() < 0.0;
        indices[k] = (neg_re ? 2U : 0U) | (neg_im ? 1U : 0U);
        residual -= set.level_point(k, neg_re, neg_im);
    }
    return indices;
}

std::vector<Complex> decompose(Complex point, const SubConstellationSet& set) {
    const auto indices = decompose_indices(point, set);
    std::vector<Complex> parts(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        parts[k] = set.subset(k)[indices[k]];
    }
    return parts;
}

std::size_t sum_point_index(Complex point, const SubConstellationSet& set) {
    const auto indices = decompose_indices(point, set);
    std::size_t index = 0;
    for (std::size_t k = indices.size(); k-- > 0;) {
        index = (index << 2) | indices[k];
    }
    return index;
}

std::vector<Complex> map_bits(const BitWord& word, const SubConstellationSet& set) {
    const std::size_t levels = set.num_levels();
    if (word.size() != 2 * levels) {
        throw std::invalid_argument("bit word length " + std::to_string(word.size()) +
                                    " does not match 2K = " + std::to_string(2 * levels));
    }
    std::vector<Complex> points(levels);
    for (std::size_t k = 0; k < levels; ++k) {
        points[k] = set.level_point(k, word.bits[2 * k] != 0, word.bits[2 * k + 1] != 0);
    }
    return points;
}

BitWord demap_bits(std::span<const Complex> points, const SubConstellationSet& set) {
    const std::size_t levels = set.num_levels();
    if (points.size() != levels) {
        throw std::invalid_argument("expected one point per level");
    }
    BitWord word;
    word.bits.resize(2 * levels);
    for (std::size_t k = 0; k < levels; ++k) {
        const bool neg_re = points[k].real() < 0.0;
        const bool neg_im = points[k].imag() < 0.0;
        const Complex expected = set.level_point(k, neg_re, neg_im);
        if (std::abs(points[k] - expected) > kGridTolerance * set.min_distance()) {
            throw NotAConstellationPoint("point is not a member of level " +
                                         std::to_string(k + 1));
        }
        word.bits[2 * k] = neg_re ? 1 : 0;
        word.bits[2 * k + 1] = neg_im ? 1 : 0;
    }
    return word;
}

BitWord word_from_sum_index(std::size_t index, std::size_t num_levels) {
    BitWord word;
    word.bits.resize(2 * num_levels);
    for (std::size_t k = 0; k < num_levels; ++k) {
        const std::size_t sym = (index >> (2 * k)) & 3U;
        word.bits[2 * k] = (sym >> 1) & 1U;
        word.bits[2 * k + 1] = sym & 1U;
    }
    return word;
}

std::size_t sum_index_from_word(const BitWord& word) {
    if (word.size() % 2 != 0) {
        throw std::invalid_argument("bit word length must be even");
    }
    std::size_t index = 0;
    for (std::size_t k = word.size() / 2; k-- > 0;) {
        index = (index << 2) | (std::size_t{word.bits[2 * k]} << 1) | word.bits[2 * k + 1];
    }
    return index;
}

} // namespace ncsimo
