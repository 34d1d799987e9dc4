#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfx/monte_carlo.hpp"

namespace cfx {

/// Half-open interval (lo, hi] on (0, infinity]; hi absent means infinity.
/// The infinite endpoint is an explicit marker, never a floating-point
/// infinity inside arithmetic.
struct ScaledInterval {
    double lo = 0.0;
    std::optional<double> hi;  // nullopt = infinity

    /// Limiting point-process mass: 1/lo - 1/hi (1/inf = 0).
    double nu_mass() const;
};

/// Disjoint union of scaled intervals, ordered and non-overlapping
/// (touching endpoints v_i == u_{i+1} are allowed and merge additively).
struct IntervalUnion {
    std::vector<ScaledInterval> intervals;

    explicit IntervalUnion(std::vector<ScaledInterval> parts);
    double nu_mass() const;
};

/// Empirical mean of Q_n((u, v]) - the number of digits with
/// A_i log2 / n in (u, v] - against both the exact finite-n expectation
/// n*(tail(m_u) - tail(m_v)) and the limit 1/u - 1/v.
struct MeanMeasureResult {
    double empirical_mean = 0.0;
    double expected_finite_n = 0.0;
    double expected_limit = 0.0;
    double stderr_ = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t discarded = 0;
    std::uint64_t m_lo = 0;  // digit range [m_lo, m_hi) realizing the event
    std::uint64_t m_hi = 0;  // 0 encodes infinity
};

MeanMeasureResult mean_measure_check(std::uint64_t n, const ScaledInterval& interval,
                                     std::uint64_t trials, std::uint64_t seed,
                                     const BatchConfig& base = {});

/// Empirical probability that Q_n has no point in any interval of the
/// union, against exp(-nu_mass) and its finite-n counterpart
/// exp(-sum of exact finite-n interval intensities).
struct AvoidanceResult {
    double empirical = 0.0;
    double expected_limit = 0.0;
    double expected_finite_n = 0.0;
    double stderr_ = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t discarded = 0;
};

AvoidanceResult avoidance_probability_check(std::uint64_t n, const IntervalUnion& region,
                                            std::uint64_t trials, std::uint64_t seed,
                                            const BatchConfig& base = {});

}  // namespace cfx
