#include "ncsimo/modem.hpp"

#include "ncsimo/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ncsimo {

namespace {

void check_design_matches(const DesignSolution& design, const SubConstellationSet& set) {
    if (design.p.size() != set.num_levels() || design.perm.size() != set.num_levels()) {
        throw std::invalid_argument("design and sub-constellation set disagree on K");
    }
    if (std::abs(design.d - set.min_distance()) > 1e-12 * design.d) {
        throw std::invalid_argument("design and sub-constellation set disagree on d");
    }
}

BitWord user_to_level_word(const BitWord& word, std::span<const std::size_t> perm) {
    BitWord out;
    out.bits.resize(word.size());
    for (std::size_t u = 0; u < perm.size(); ++u) {
        out.bits[2 * perm[u]] = word.bits[2 * u];
        out.bits[2 * perm[u] + 1] = word.bits[2 * u + 1];
    }
    return out;
}

BitWord level_to_user_word(const BitWord& word, std::span<const std::size_t> perm) {
    BitWord out;
    out.bits.resize(word.size());
    for (std::size_t u = 0; u < perm.size(); ++u) {
        out.bits[2 * u] = word.bits[2 * perm[u]];
        out.bits[2 * u + 1] = word.bits[2 * perm[u] + 1];
    }
    return out;
}

} // namespace

RxBlock RxBlock::from_matrix(const Eigen::MatrixXcd& y) {
    if (y.cols() != 2) {
        throw std::invalid_argument("two-slot receive block must have 2 columns");
    }
    return RxBlock{y.col(0), y.col(1)};
}

TxBlock assemble_codeword(const BitWord& word, const DesignSolution& design,
                          std::span<const UserProfile> profiles, const SubConstellationSet& set) {
    check_design_matches(design, set);
    const std::size_t users = set.num_levels();
    if (profiles.size() != users) {
        throw std::invalid_argument("one profile per user expected");
    }
    if (!is_feasible(design, profiles)) {
        throw std::invalid_argument("design violates the per-slot power constraints");
    }
    if (word.size() != 2 * users) {
        throw std::invalid_argument("bit word length must be 2K");
    }
    const BitWord level_word = user_to_level_word(word, design.perm);
    const auto symbols = map_bits(level_word, set);

    TxBlock block;
    block.x.resize(static_cast<Eigen::Index>(users), 2);
    for (std::size_t u = 0; u < users; ++u) {
        const std::size_t k = design.perm[u];
        const double root_p = std::sqrt(design.p[k]);
        const double root_beta = std::sqrt(profiles[u].beta);
        const auto row = static_cast<Eigen::Index>(u);
        block.x(row, 0) = 1.0 / (root_p * root_beta);
        block.x(row, 1) = root_p * symbols[k] / root_beta;
    }
    block.word = word;
    block.sum_index = sum_index_from_word(level_word);
    return block;
}

std::vector<TxBlock> build_codebook(const DesignSolution& design,
                                    std::span<const UserProfile> profiles,
                                    const SubConstellationSet& set) {
    const std::size_t count = set.sum_points().size();
    std::vector<TxBlock> codebook;
    codebook.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const BitWord level_word = word_from_sum_index(i, set.num_levels());
        codebook.push_back(
            assemble_codeword(level_to_user_word(level_word, design.perm), design, profiles, set));
    }
    return codebook;
}

NcmlDetector::NcmlDetector(const DesignSolution& design, const SubConstellationSet& set,
                           double sigma2)
    : set_(&set), perm_(design.perm) {
    check_design_matches(design, set);
    if (!(sigma2 >= 0.0)) {
        throw std::invalid_argument("noise power must be nonnegative");
    }
    a_ = sigma2;
    b_ = sigma2;
    const double d2 = design.d * design.d;
    for (std::size_t k = 0; k < design.p.size(); ++k) {
        a_ += 1.0 / design.p[k];
        b_ += design.p[k] * design.energies[k] * d2;
    }
    const auto points = set.sum_points();
    det_.resize(points.size());
    log_det_.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        det_[i] = a_ * b_ - std::norm(points[i]);
        if (!(det_[i] > 0.0)) {
            throw InternalConsistencyError("candidate Gram matrix is not positive definite (ab - |c|^2 = " +
                                           std::to_string(det_[i]) + ")");
        }
        log_det_[i] = std::log(det_[i]);
    }
}

double NcmlDetector::objective(std::size_t index, double energy1, double energy2, Complex cross,
                               std::size_t num_antennas) const {
    const Complex c = set_->sum_points()[index];
    const double quad = a_ * energy2 + b_ * energy1 - 2.0 * (c * cross).real();
    return quad / det_[index] + static_cast<double>(num_antennas) * log_det_[index];
}

NcmlDecision NcmlDetector::detect(const RxBlock& rx) const {
    if (rx.y1.size() != rx.y2.size() || rx.y1.size() == 0) {
        throw std::invalid_argument("receive slots must be nonempty and of equal length");
    }
    const double energy1 = rx.y1.squaredNorm();
    const double energy2 = rx.y2.squaredNorm();
    const Complex cross = rx.y2.dot(rx.y1);  // y2^H y1
    const std::size_t antennas = rx.num_antennas();

    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < det_.size(); ++i) {
        const double value = objective(i, energy1, energy2, cross, antennas);
        if (value < best_value) {
            best_value = value;
            best = i;
        }
    }
    NcmlDecision decision;
    decision.index = best;
    decision.point = set_->sum_points()[best];
    const auto parts = decompose(decision.point, *set_);
    decision.word = level_to_user_word(demap_bits(parts, *set_), perm_);
    return decision;
}

NcmlDecision detect_ncml(const RxBlock& rx, const DesignSolution& design,
                         const SubConstellationSet& set, double sigma2) {
    return NcmlDetector(design, set, sigma2).detect(rx);
}

std::size_t detect_ncml_general(const Eigen::MatrixXcd& y,
                                std::span<const Eigen::MatrixXcd> codebook,
                                std::span<const double> beta, double sigma2) {
    if (codebook.empty()) {
        throw std::invalid_argument("codebook must not be empty");
    }
    const Eigen::Index slots = y.cols();
    if (slots < 1) {
        throw std::invalid_argument("receive block must have at least one slot");
    }
    Eigen::VectorXd gains(static_cast<Eigen::Index>(beta.size()));
    for (std::size_t k = 0; k < beta.size(); ++k) {
        gains(static_cast<Eigen::Index>(k)) = beta[k];
    }
    // Columns of Y^H are the per-antenna observations y_m.
    const Eigen::MatrixXcd yh = y.adjoint();
    const double antennas = static_cast<double>(y.rows());

    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < codebook.size(); ++i) {
        const auto& x = codebook[i];
        if (x.cols() != slots || x.rows() != gains.size()) {
            throw std::invalid_argument("codeword " + std::to_string(i) + " has the wrong shape");
        }
        Eigen::MatrixXcd r = x.adjoint() * gains.asDiagonal() * x;
        r.diagonal().array() += sigma2;
        const Eigen::LLT<Eigen::MatrixXcd> chol(r);
        if (chol.info() != Eigen::Success) {
            throw InternalConsistencyError("codeword " + std::to_string(i) +
                                           " has a singular covariance");
        }
        const Eigen::MatrixXcd whitened = chol.matrixL().solve(yh);
        const double log_det = 2.0 * chol.matrixLLT().diagonal().real().array().log().sum();
        const double value = whitened.squaredNorm() + antennas * log_det;
        if (value < best_value) {
            best_value = value;
            best = i;
        }
    }
    return best;
}

GramStats block_gram(const Eigen::MatrixXcd& x, std::span<const double> beta, double sigma2) {
    if (x.cols() != 2 || x.rows() != static_cast<Eigen::Index>(beta.size())) {
        throw std::invalid_argument("block_gram expects a K x 2 block and K gains");
    }
    GramStats g;
    g.a = sigma2;
    g.b = sigma2;
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
        const double gain = beta[static_cast<std::size_t>(k)];
        g.a += gain * std::norm(x(k, 0));
        g.b += gain * std::norm(x(k, 1));
        g.c += gain * std::conj(x(k, 0)) * x(k, 1);
    }
    return g;
}

double kl_from_gram(const GramStats& g, const GramStats& gt) {
    const double det = g.det();
    const double det_t = gt.det();
    if (!(det > 0.0) || !(det_t > 0.0)) {
        throw InternalConsistencyError("KL distance requires positive definite Gram matrices");
    }
    // tr([a c; c* b] adj([at ct; ct* bt])) / det_t
    const double trace =
        (g.a * gt.b + gt.a * g.b - 2.0 * (g.c * std::conj(gt.c)).real()) / det_t;
    return trace - std::log(det / det_t) - 2.0;
}

KlPair kl_distance(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& xt,
                   std::span<const double> beta, double sigma2, std::size_t num_antennas) {
    const double value = kl_from_gram(block_gram(x, beta, sigma2), block_gram(xt, beta, sigma2));
    return {value, static_cast<double>(num_antennas) * value};
}

MinKlResult min_kl_over_codebook(const DesignSolution& design, const SubConstellationSet& set,
                                 double sigma2) {
    check_design_matches(design, set);
    if (set.num_levels() > 6) {
        throw UnsupportedSize("codebook KL scan supports at most 6 users, got " +
                              std::to_string(set.num_levels()));
    }
    const auto points = set.sum_points();
    std::vector<GramStats> grams(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto symbols = decompose(points[i], set);
        grams[i] = gram_stats(design, symbols, sigma2);
    }
    MinKlResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i == j) {
                continue;
            }
            const double value = kl_from_gram(grams[i], grams[j]);
            if (value < best.value) {
                best.value = value;
                best.index = i;
                best.other_index = j;
            }
        }
    }
    best.point = points[best.index];
    best.other_point = points[best.other_index];
    return best;
}

} // namespace ncsimo
