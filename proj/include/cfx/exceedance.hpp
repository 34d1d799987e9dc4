#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cfx {

/// Exceedance statistics of one digit sequence at level u: the count of
/// positions with A_i log 2 > n u, and the k largest scaled values.
struct ExceedanceSummary {
    std::uint64_t n = 0;
    double u = 0.0;
    std::uint64_t threshold_m = 0;            // {A_i log2 > n u} == {A_i >= m}
    std::uint64_t count = 0;                  // #{i <= n : A_i >= m}
    std::vector<double> top_k;                // largest A_i log 2 values, descending
};

/// Scan a digit sequence once, counting threshold exceedances and keeping
/// the top_k largest scaled digit values.
ExceedanceSummary exceedance_count(std::span<const std::uint64_t> digits, double u,
                                   std::size_t top_k = 3);

}  // namespace cfx
