#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cfx/rational.hpp"

namespace cfx::oracle {

/// Exact rational endpoints (lo < hi) of the cylinder set
/// {x : A_1 = d_1, ..., A_j = d_j}: the interval between the j-th
/// convergent p/q and the mediant (p + p_prev)/(q + q_prev).
std::pair<Rational, Rational> cylinder_interval(std::span<const std::uint64_t> digits);

/// Gauss measure of (a, b), re-exported here as the oracle's primitive.
double gauss_measure_of_interval(const Rational& a, const Rational& b);

/// Per-position digit constraint for small-n exact computations.
struct CylinderConstraint {
    enum class Kind { exactly, at_least, at_most, free_digit };
    Kind kind = Kind::free_digit;
    std::uint64_t bound = 0;

    static CylinderConstraint exactly(std::uint64_t a) { return {Kind::exactly, a}; }
    static CylinderConstraint at_least(std::uint64_t m) { return {Kind::at_least, m}; }
    static CylinderConstraint at_most(std::uint64_t m) { return {Kind::at_most, m}; }
    static CylinderConstraint any() { return {Kind::free_digit, 0}; }
};

/// A probability known to lie in [lo, hi] (truncation bracket plus a
/// conservative floating-point allowance).
struct ProbBracket {
    double lo = 0.0;
    double hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
    double half_width() const { return 0.5 * (hi - lo); }
};

/// P(A_1 in C_1, ..., A_n in C_n) for n <= 3, by exact enumeration of
/// digit branches. Unbounded digit alphabets are cut at `tail_truncation`
/// past their lower end; the remainder is bracketed rigorously, with the
/// outermost digit tail summed in closed form (it telescopes).
ProbBracket probability_of(std::span<const CylinderConstraint> constraints,
                           std::uint64_t tail_truncation = 3000);

/// Exact law of the exceedance count #{i <= n : A_i log2 > n u} for
/// n in {1,2,3}, with a rigorous error bound.
struct ExactLaw {
    std::uint64_t n = 0;
    std::uint64_t threshold_m = 0;
    std::vector<double> probabilities;  // P(count = k), k = 0..n, midpoints
    double error_bound = 0.0;           // max half-width over the atoms
};

/// Throws TruncationTooCoarse if the bracket cannot reach 1e-6 at the
/// given truncation depth.
ExactLaw exact_exceedance_distribution(std::uint64_t n, double u,
                                       std::uint64_t tail_truncation = 3000);

}  // namespace cfx::oracle
