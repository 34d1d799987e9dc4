#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cfx/monte_carlo.hpp"

namespace cfx {

/// Exponential psi-mixing model psi(gap) = C * theta^-gap for the digit
/// process. The constants are configuration, never baked into conclusions;
/// every bound is monotone in (C, theta) so rigorous values can be
/// substituted by the caller.
struct MixingModel {
    double C = 2.0;
    double theta = 3.29;

    double psi(double gap) const;
    void validate() const;
};

/// Dependency structure for a finite family of Bernoulli indicators:
/// marginals, neighborhoods of dependence B_alpha (which must contain
/// alpha), pairwise expectations inside neighborhoods, long-range terms,
/// and a partition of the index set into blocks. Indices run 0..n-1.
struct DependencySpec {
    enum class PairKind { analytic_bound, empirical };

    std::int64_t index_count = 0;
    std::function<double(std::int64_t)> marginal;
    std::function<std::vector<std::int64_t>(std::int64_t)> neighborhood;
    /// E(X_a X_b) for b in B_a \ {a}.
    std::function<double(std::int64_t, std::int64_t)> pair_expectation;
    /// E|E(X_a - p_a | sigma(X_b : b outside B_a))|, or 0 under exact
    /// independence.
    std::function<double(std::int64_t)> b3_term;
    /// Disjoint blocks covering 0..n-1; empty means one block of all.
    std::vector<std::vector<std::int64_t>> partition;
    PairKind pair_kind = PairKind::analytic_bound;

    /// Stationary homogeneous family: constant marginal p, window
    /// B_a = [a-radius, a+radius], constant pair expectation and b3 term.
    /// Enables the O(1) closed-form path in compute_b_terms.
    static DependencySpec homogeneous(std::int64_t n, double p, std::int64_t radius,
                                      double pair_value, double b3_value = 0.0);

    bool homogeneous_shape = false;  // set by the factory above
    double homog_p = 0.0;
    std::int64_t homog_radius = 0;
    double homog_pair = 0.0;
    double homog_b3 = 0.0;
};

/// The three error terms and the assembled bound of the Poisson
/// approximation theorem for dependent Bernoulli families:
/// total = multiplier * (2 b1 + 2 b2 + b3),
/// multiplier = min{2, 2.8 * max_j lambda_j^{-1/2}}.
struct ChenSteinBounds {
    double b1 = 0.0;
    double b2 = 0.0;
    double b3 = 0.0;
    std::vector<double> lambdas;
    double multiplier = 0.0;
    double total = 0.0;
    enum class Mode { analytic, empirical } mode = Mode::analytic;
};

/// b1/b2/b3 and the theorem bound for an explicit dependency spec. The
/// homogeneous closed form is used when available and must agree with the
/// generic path (property-tested). Throws InvalidSpec on structural
/// violations.
ChenSteinBounds compute_b_terms(const DependencySpec& spec);

/// The unique l > 0 with l * theta^l = n, by bisection to relative
/// residual 1e-12. This is the dependence-window radius: digits further
/// apart than l_n are nearly independent at scale 1/n.
double solve_window_radius(double theta, std::uint64_t n);

/// Analytic b-term bounds for the digit exceedance family at level u:
/// b1 <= 2 l_n/(n u^2), b2 <= 2(1+C) l_n/(n u^2), b3 <= C l_n/(n u),
/// assembled with the conservative multiplier 2. Marked analytic.
ChenSteinBounds analytic_bounds_cf(std::uint64_t n, double u, const MixingModel& mixing);

/// Bound on the distance between the exceedance-count Poissonization at
/// the exact finite-n mean and the limit Poisson(1/u):
/// |n P(A_1 log2 > n u) - 1/u| <= 3 log2 / (2 u^2 n).
double poisson_mean_gap_bound(std::uint64_t n, double u);

/// The exact finite-n discrepancy |n P(A_1 log2 > n u) - 1/u| itself.
double poisson_mean_gap_exact(std::uint64_t n, double u);

/// The fully explicit rate constant kappa = 16 + 10 C + (3/2) log 2, such
/// that for all u > 0 and n past the mixing scale,
///   analytic bound total + mean-gap bound
///     <= kappa * max{1/u, 1/u^2} * l_n / n.
double rate_constant(const MixingModel& mixing);

/// Certified envelope for sup_{u >= delta} d_TV(count law, Poisson(1/u)):
/// kappa / min{delta, delta^2} * l_n / n.
double rate_bound(std::uint64_t n, double delta, const MixingModel& mixing);

/// Monte Carlo estimate of the joint exceedance probability
/// P(A_1 >= m, A_{1+gap} >= m) with m = scaled_threshold(n, u), for
/// validating the mixing-based pairwise bound.
struct PairEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    std::uint64_t discarded = 0;
};

PairEstimate empirical_pair_expectation(std::uint64_t n, double u, std::uint64_t gap,
                                        std::uint64_t trials, std::uint64_t seed,
                                        const BatchConfig& base = {});

}  // namespace cfx
