#pragma once

// Power allocation and user-to-level assignment maximizing the minimum KL
// distance of the two-slot codebook.

#include "ncsimo/udcg.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ncsimo {

/// Per-user power budget (W) and large-scale gain (linear).
struct UserProfile {
    double power = 0.0;
    double beta = 0.0;

    double link_budget() const { return power * beta; }
};

/// perm[u] is the 0-based level assigned to user u. p is indexed by level.
struct DesignSolution {
    double d = 0.0;
    std::vector<double> p;
    std::vector<std::size_t> perm;
    std::vector<double> energies;

    std::size_t num_users() const { return p.size(); }
    std::vector<std::size_t> inverse_perm() const;
};

/// Entries of the 2x2 matrix X^H D X + sigma^2 I = [a c; c* b].
struct GramStats {
    double a = 0.0;
    double b = 0.0;
    Complex c{};

    double det() const { return a * b - std::norm(c); }
};

/// Indices of users sorted by P*beta, nondecreasing, stable for ties.
std::vector<std::size_t> sort_users(std::span<const UserProfile> profiles);

std::vector<UserProfile> apply_order(std::span<const UserProfile> profiles,
                                     std::span<const std::size_t> order);

/// Closed-form optimum for users sorted by P*beta: d = min_k P_k beta_k / sqrt(E_k),
/// p_k = 1 / (sqrt(E_k) d), identity assignment. sigma2 only has to be
/// positive; the optimizer does not depend on it.
DesignSolution optimal_design(std::span<const UserProfile> profiles, double sigma2);

struct PermutationScore {
    std::vector<std::size_t> perm;
    double d = 0.0;
    double objective = 0.0;  // best grid value of ab/d^2 for this assignment
};

struct GridSearchResult {
    DesignSolution best;
    double objective = 0.0;
    std::vector<PermutationScore> scores;  // lexicographic permutation order
};

/// Exhaustive oracle: all K! assignments, each with d at its largest feasible
/// value, and a log-spaced grid of `grid_resolution` points per p_k over its
/// feasible interval. Limited to K <= 3.
///
/// Assignments that reach the same d have the same true optimum, so which of
/// them comes out on top is decided by grid discretization alone; use
/// `scores` to ask whether a given assignment is optimal.
GridSearchResult grid_search(std::span<const UserProfile> profiles, double sigma2,
                             std::size_t grid_resolution = 200);

DesignSolution grid_search_design(std::span<const UserProfile> profiles, double sigma2,
                                  std::size_t grid_resolution = 200);

/// (sum 1/p_k + sigma^2)(sum p_k E_k + sigma^2/d^2), i.e. ab/d^2. The minimum
/// pairwise KL distance is 1/(ab/d^2 - 1/2), so smaller is better.
double design_objective(const DesignSolution& design, double sigma2);

/// Largest d feasible under a given assignment: min_u P_u beta_u / sqrt(E_perm[u]).
double max_feasible_distance(std::span<const UserProfile> profiles,
                             std::span<const std::size_t> perm);

/// Both per-slot power constraints for every user, with relative slack.
bool is_feasible(const DesignSolution& design, std::span<const UserProfile> profiles,
                 double rel_tol = 1e-12);

/// a and b of the design (identical for every codeword) and c = sum of symbols.
GramStats gram_stats(const DesignSolution& design, std::span<const Complex> symbols,
                     double sigma2);

struct AssignmentResult {
    std::vector<std::size_t> perm;
    double value = 0.0;
};

/// argmax over permutations of min_k a_k / b_perm[k], by enumeration.
/// The first maximizer in lexicographic order wins ties.
AssignmentResult assignment_order_check(std::span<const double> a, std::span<const double> b);

} // namespace ncsimo
