#include "ncsimo/linkdesign.hpp"

#include "ncsimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ncsimo {

namespace {

void validate_profiles(std::span<const UserProfile> profiles) {
    if (profiles.empty()) {
        throw std::invalid_argument("at least one user profile is required");
    }
    for (std::size_t u = 0; u < profiles.size(); ++u) {
        const auto& prof = profiles[u];
        if (!(prof.power > 0.0) || !(prof.beta > 0.0) || !std::isfinite(prof.link_budget())) {
            throw std::invalid_argument("user " + std::to_string(u + 1) +
                                        ": power and beta must be positive and finite");
        }
    }
}

void validate_sigma2(double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("noise power must be positive and finite");
    }
}

std::vector<double> level_energies(std::size_t count) {
    std::vector<double> energies(count);
    for (std::size_t k = 0; k < count; ++k) {
        energies[k] = SubConstellationSet::level_energy(k);
    }
    return energies;
}

// Points on [lo, hi], geometric spacing, both ends included.
std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (n == 1 || hi <= lo) {
        return std::vector<double>(n, lo);
    }
    std::vector<double> grid(n);
    const double llo = std::log(lo);
    const double step = (std::log(hi) - llo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = std::exp(llo + step * static_cast<double>(i));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

} // namespace

std::vector<std::size_t> DesignSolution::inverse_perm() const {
    std::vector<std::size_t> inv(perm.size());
    for (std::size_t u = 0; u < perm.size(); ++u) {
        inv[perm[u]] = u;
    }
    return inv;
}

std::vector<std::size_t> sort_users(std::span<const UserProfile> profiles) {
    std::vector<std::size_t> order(profiles.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
        return profiles[lhs].link_budget() < profiles[rhs].link_budget();
    });
    return order;
}

std::vector<UserProfile> apply_order(std::span<const UserProfile> profiles,
                                     std::span<const std::size_t> order) {
    std::vector<UserProfile> sorted;
    sorted.reserve(order.size());
    for (const auto idx : order) {
        sorted.push_back(profiles[idx]);
    }
    return sorted;
}

double max_feasible_distance(std::span<const UserProfile> profiles,
                             std::span<const std::size_t> perm) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < profiles.size(); ++u) {
        const double cand =
            profiles[u].link_budget() / std::sqrt(SubConstellationSet::level_energy(perm[u]));
        // Strict comparison keeps the lowest index on ties.
        if (cand < d) {
            d = cand;
        }
    }
    return d;
}

DesignSolution optimal_design(std::span<const UserProfile> profiles, double sigma2) {
    validate_profiles(profiles);
    validate_sigma2(sigma2);
    for (std::size_t u = 1; u < profiles.size(); ++u) {
        if (profiles[u].link_budget() < profiles[u - 1].link_budget()) {
            throw std::invalid_argument("profiles must be sorted by P*beta (see sort_users)");
        }
    }
    const std::size_t users = profiles.size();
    DesignSolution sol;
    sol.perm.resize(users);
    std::iota(sol.perm.begin(), sol.perm.end(), std::size_t{0});
    sol.energies = level_energies(users);
    sol.d = max_feasible_distance(profiles, sol.perm);
    sol.p.resize(users);
    for (std::size_t k = 0; k < users; ++k) {
        sol.p[k] = 1.0 / (std::sqrt(sol.energies[k]) * sol.d);
    }
    return sol;
}

GridSearchResult grid_search(std::span<const UserProfile> profiles, double sigma2,
                             std::size_t grid_resolution) {
    validate_profiles(profiles);
    validate_sigma2(sigma2);
    const std::size_t users = profiles.size();
    if (users > 3) {
        throw UnsupportedSize("grid search supports at most 3 users, got " +
                              std::to_string(users));
    }
    if (grid_resolution == 0) {
        throw std::invalid_argument("grid resolution must be positive");
    }
    const auto energies = level_energies(users);

    GridSearchResult result;
    result.objective = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> perm(users);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
        const double d = max_feasible_distance(profiles, perm);
        std::vector<std::size_t> inv(users);
        for (std::size_t u = 0; u < users; ++u) {
            inv[perm[u]] = u;
        }
        std::vector<std::vector<double>> grids(users);
        for (std::size_t k = 0; k < users; ++k) {
            const double budget = profiles[inv[k]].link_budget();
            const double lo = 1.0 / budget;
            const double hi = budget / (energies[k] * d * d);
            grids[k] = log_grid(lo, std::max(lo, hi), grid_resolution);
        }

        // The objective factorizes into sums over coordinates, so nest the
        // loops and carry partial sums.
        const double tail = sigma2 / (d * d);
        PermutationScore score{perm, d, std::numeric_limits<double>::infinity()};
        std::vector<std::size_t> idx(users, 0);
        std::vector<double> p(users);
        while (true) {
            double inv_sum = sigma2;
            double energy_sum = tail;
            for (std::size_t k = 0; k < users; ++k) {
                p[k] = grids[k][idx[k]];
                inv_sum += 1.0 / p[k];
                energy_sum += p[k] * energies[k];
            }
            const double value = inv_sum * energy_sum;
            if (value < score.objective) {
                score.objective = value;
            }
            if (value < result.objective) {
                result.objective = value;
                result.best.d = d;
                result.best.p = p;
                result.best.perm = perm;
            }
            std::size_t k = 0;
            while (k < users && ++idx[k] == grid_resolution) {
                idx[k] = 0;
                ++k;
            }
            if (k == users) {
                break;
            }
        }
        result.scores.push_back(std::move(score));
    } while (std::next_permutation(perm.begin(), perm.end()));

    result.best.energies = energies;
    return result;
}

DesignSolution grid_search_design(std::span<const UserProfile> profiles, double sigma2,
                                  std::size_t grid_resolution) {
    return grid_search(profiles, sigma2, grid_resolution).best;
}

double design_objective(const DesignSolution& design, double sigma2) {
    double inv_sum = sigma2;
    double energy_sum = sigma2 / (design.d * design.d);
    for (std::size_t k = 0; k < design.p.size(); ++k) {
        inv_sum += 1.0 / design.p[k];
        energy_sum += design.p[k] * design.energies[k];
    }
    return inv_sum * energy_sum;
}

bool is_feasible(const DesignSolution& design, std::span<const UserProfile> profiles,
                 double rel_tol) {
    const std::size_t users = profiles.size();
    if (design.p.size() != users || design.perm.size() != users ||
        design.energies.size() != users || !(design.d > 0.0)) {
        return false;
    }
    for (std::size_t u = 0; u < users; ++u) {
        const std::size_t k = design.perm[u];
        if (k >= users) {
            return false;
        }
        const double budget = profiles[u].link_budget();
        const double pk = design.p[k];
        const double lo = 1.0 / budget;
        const double hi = budget / (design.energies[k] * design.d * design.d);
        if (pk < lo * (1.0 - rel_tol) || pk > hi * (1.0 + rel_tol)) {
            return false;
        }
    }
    return true;
}

GramStats gram_stats(const DesignSolution& design, std::span<const Complex> symbols,
                     double sigma2) {
    if (symbols.size() != design.p.size()) {
        throw std::invalid_argument("gram_stats: one symbol per level expected");
    }
    GramStats g;
    g.a = sigma2;
    g.b = sigma2;
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        g.a += 1.0 / design.p[k];
        g.b += design.p[k] * std::norm(symbols[k]);
        g.c += symbols[k];
    }
    return g;
}

AssignmentResult assignment_order_check(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("sequences must be nonempty and of equal length");
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!(a[k] > 0.0) || !(b[k] > 0.0)) {
            throw std::invalid_argument("sequences must be positive");
        }
    }
    AssignmentResult best;
    best.value = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < a.size(); ++k) {
            worst = std::min(worst, a[k] / b[perm[k]]);
        }
        if (worst > best.value) {
            best.value = worst;
            best.perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace ncsimo
