#pragma once

// Brute-force reference computations used by the tests. Nothing here calls
// into the library's fast paths.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

/// Level k (0-based) point straight from {(±1/2 ± j/2) 2^k d} with 1-based
/// exponent k-1, i.e. half side 2^k d / 2.
inline Complex level_point(std::size_t k, int sign_re, int sign_im, double d) {
    const double half = 0.5 * std::pow(2.0, static_cast<double>(k)) * d;
    return {sign_re * half, sign_im * half};
}

struct Tuple {
    std::vector<int> sign_re;
    std::vector<int> sign_im;
    Complex sum;
};

/// All 4^K tuples in an arbitrary (oracle-own) order.
inline std::vector<Tuple> enumerate_tuples(std::size_t levels, double d) {
    std::vector<Tuple> out;
    const std::size_t count = std::size_t{1} << (2 * levels);
    for (std::size_t code = 0; code < count; ++code) {
        Tuple t;
        t.sign_re.resize(levels);
        t.sign_im.resize(levels);
        for (std::size_t k = 0; k < levels; ++k) {
            t.sign_re[k] = ((code >> (2 * k + 1)) & 1U) ? -1 : 1;
            t.sign_im[k] = ((code >> (2 * k)) & 1U) ? -1 : 1;
            t.sum += level_point(k, t.sign_re[k], t.sign_im[k], d);
        }
        out.push_back(t);
    }
    return out;
}

inline double min_pairwise_distance(const std::vector<Complex>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            best = std::min(best, std::abs(pts[i] - pts[j]));
        }
    }
    return best;
}

/// Every tuple whose sum equals `point` (within tol).
inline std::vector<Tuple> tuples_summing_to(Complex point, std::size_t levels, double d,
                                            double tol = 1e-9) {
    std::vector<Tuple> hits;
    for (const auto& t : enumerate_tuples(levels, d)) {
        if (std::abs(t.sum - point) <= tol * d) {
            hits.push_back(t);
        }
    }
    return hits;
}

/// Generic Gaussian KL: tr(R Rt^-1) - ln det(R Rt^-1) - T via dense algebra.
inline double kl_dense(const Eigen::MatrixXcd& r, const Eigen::MatrixXcd& rt) {
    const Eigen::MatrixXcd prod = r * rt.inverse();
    const double trace = prod.trace().real();
    const double logdet = std::log(std::abs(prod.determinant()));
    return trace - logdet - static_cast<double>(r.rows());
}

inline Eigen::MatrixXcd covariance(const Eigen::MatrixXcd& x, const std::vector<double>& beta,
                                   double sigma2) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(x.rows(), x.rows());
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
        d(k, k) = beta[static_cast<std::size_t>(k)];
    }
    Eigen::MatrixXcd r = x.adjoint() * d * x;
    r += sigma2 * Eigen::MatrixXcd::Identity(x.cols(), x.cols());
    return r;
}

/// y^H (I_M kron R)^-1 y + ln det(I_M kron R) with the Kronecker product
/// materialized, y = vec(Y^H).
inline double ml_metric_kron(const Eigen::MatrixXcd& y, const Eigen::MatrixXcd& r) {
    const Eigen::Index m = y.rows();
    const Eigen::Index t = y.cols();
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(m * t, m * t);
    for (Eigen::Index i = 0; i < m; ++i) {
        big.block(i * t, i * t, t, t) = r;
    }
    const Eigen::MatrixXcd yh = y.adjoint();
    const Eigen::VectorXcd vec = Eigen::Map<const Eigen::VectorXcd>(yh.data(), m * t);
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(big);
    const double quad = (vec.adjoint() * lu.solve(vec))(0, 0).real();
    return quad + std::log(std::abs(lu.determinant()));
}

/// All permutations of 0..n-1, lexicographic.
inline std::vector<std::vector<std::size_t>> permutations(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::vector<std::vector<std::size_t>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

} // namespace oracle
