#pragma once

// Two-slot codewords (known reference slot, data slot carrying one level
// symbol per user), the noncoherent ML detectors and pairwise KL distances.

#include "ncsimo/linkdesign.hpp"
#include "ncsimo/udcg.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace ncsimo {

/// K x 2 transmit matrix D^(-1/2) Pi S_2 and the user-ordered word it carries.
struct TxBlock {
    Eigen::MatrixXcd x;
    BitWord word;
    std::size_t sum_index = 0;  // index of c = sum_k s_k in the sum constellation
};

struct RxBlock {
    Eigen::VectorXcd y1;
    Eigen::VectorXcd y2;

    static RxBlock from_matrix(const Eigen::MatrixXcd& y);
    std::size_t num_antennas() const { return static_cast<std::size_t>(y1.size()); }
};

/// Single-antenna KL distance and its M-antenna counterpart.
struct KlPair {
    double value = 0.0;
    double value_m = 0.0;
};

/// `word` holds two bits per user in user order; user u's bits select the
/// symbol of level design.perm[u]. `profiles` are in the order the design
/// was computed for. Throws std::invalid_argument for an infeasible design.
TxBlock assemble_codeword(const BitWord& word, const DesignSolution& design,
                          std::span<const UserProfile> profiles, const SubConstellationSet& set);

/// All 4^K codewords, position i carrying sum point i.
std::vector<TxBlock> build_codebook(const DesignSolution& design,
                                    std::span<const UserProfile> profiles,
                                    const SubConstellationSet& set);

struct NcmlDecision {
    std::size_t index = 0;
    Complex point{};
    BitWord word;  // user order
};

/// Two-slot noncoherent ML detector. The designed codebook has the same a
/// and b for every codeword, so candidates are the sum points c and the
/// per-candidate determinant terms are computed once.
class NcmlDetector {
public:
    NcmlDetector(const DesignSolution& design, const SubConstellationSet& set, double sigma2);

    NcmlDecision detect(const RxBlock& rx) const;

    /// Objective of one candidate; lower is more likely.
    double objective(std::size_t index, double energy1, double energy2, Complex cross,
                     std::size_t num_antennas) const;

    double a() const { return a_; }
    double b() const { return b_; }

private:
    const SubConstellationSet* set_;
    std::vector<std::size_t> perm_;
    double a_;
    double b_;
    std::vector<double> det_;
    std::vector<double> log_det_;
};

NcmlDecision detect_ncml(const RxBlock& rx, const DesignSolution& design,
                         const SubConstellationSet& set, double sigma2);

/// Generic noncoherent ML over an arbitrary codebook of K x T matrices:
/// argmin_X sum_m y_m^H R^-1 y_m + M ln det R with R = X^H D X + sigma^2 I_T,
/// where y_m^H is row m of Y. Lowest index wins ties.
std::size_t detect_ncml_general(const Eigen::MatrixXcd& y,
                                std::span<const Eigen::MatrixXcd> codebook,
                                std::span<const double> beta, double sigma2);

/// X^H D X + sigma^2 I for a K x 2 block.
GramStats block_gram(const Eigen::MatrixXcd& x, std::span<const double> beta, double sigma2);

/// tr(R Rt^-1) - ln det(R Rt^-1) - 2 from the 2x2 closed forms.
double kl_from_gram(const GramStats& g, const GramStats& gt);

KlPair kl_distance(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& xt,
                   std::span<const double> beta, double sigma2, std::size_t num_antennas = 1);

struct MinKlResult {
    double value = 0.0;
    std::size_t index = 0;        // c, the true codeword
    std::size_t other_index = 0;  // c~, the confused one
    Complex point{};
    Complex other_point{};
};

/// Exhaustive minimum of D_KL(c || c~) over ordered pairs of distinct
/// codewords of the designed codebook. Limited to K <= 6.
MinKlResult min_kl_over_codebook(const DesignSolution& design, const SubConstellationSet& set,
                                 double sigma2);

} // namespace ncsimo
