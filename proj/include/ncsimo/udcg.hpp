#pragma once

// Multilevel 4-QAM sub-constellations whose pointwise sums form a square
// 4^K-QAM grid with a unique decomposition back to the per-level symbols.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ncsimo {

using Complex = std::complex<double>;

/// Two bits per level: (real-axis sign bit, imaginary-axis sign bit), level 1
/// first. Bit 0 maps to a positive coordinate, bit 1 to a negative one.
struct BitWord {
    std::vector<std::uint8_t> bits;

    std::size_t size() const { return bits.size(); }
    bool operator==(const BitWord&) const = default;
};

/// Number of positions where two words of equal length differ.
std::size_t hamming_distance(const BitWord& lhs, const BitWord& rhs);

class SubConstellationSet {
public:
    /// Builds X_k = {(±1/2 ± j/2) 2^(k-1) d} for k = 1..K and enumerates the
    /// 4^K sums. Throws std::invalid_argument for K == 0 or d <= 0.
    SubConstellationSet(std::size_t num_levels, double min_distance);

    std::size_t num_levels() const { return num_levels_; }
    double min_distance() const { return min_distance_; }

    /// Level k (0-based) holds 4 points; symbol index = 2*b_re + b_im.
    std::span<const Complex> subset(std::size_t level) const;

    /// Sum points in tuple order: base-4 digit k of the index is the symbol
    /// index chosen at level k (level 0 least significant).
    std::span<const Complex> sum_points() const { return sum_points_; }

    /// E_k = 2^(2k-3) for 1-based k, so that |x|^2 = E_k d^2 on level k.
    static double level_energy(std::size_t level);

    /// Symbol of a level for the given sign bits.
    Complex level_point(std::size_t level, bool negative_re, bool negative_im) const;

private:
    std::size_t num_levels_;
    double min_distance_;
    std::vector<Complex> subsets_;  // 4 per level, contiguous
    std::vector<Complex> sum_points_;
};

SubConstellationSet build_sub_constellations(std::size_t num_levels, double min_distance);

/// Per-level symbol indices of the unique tuple summing to `point`, found by
/// peeling levels from K down to 1. Throws NotAConstellationPoint if the point
/// is off the Q grid (tolerance 1e-9 d per coordinate) or outside Q.
std::vector<std::size_t> decompose_indices(Complex point, const SubConstellationSet& set);

/// Same tuple as decompose_indices, returned as the level points x_1..x_K.
std::vector<Complex> decompose(Complex point, const SubConstellationSet& set);

/// Index of `point` in set.sum_points().
std::size_t sum_point_index(Complex point, const SubConstellationSet& set);

std::vector<Complex> map_bits(const BitWord& word, const SubConstellationSet& set);

/// Inverse of map_bits. Every input point must be a member of its level.
BitWord demap_bits(std::span<const Complex> points, const SubConstellationSet& set);

/// Bits of the tuple with the given sum-point index.
BitWord word_from_sum_index(std::size_t index, std::size_t num_levels);
std::size_t sum_index_from_word(const BitWord& word);

} // namespace ncsimo
