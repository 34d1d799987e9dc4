#pragma once

#include <cstdint>

namespace cfx {

/// P(A_1 >= k) = log(1 + 1/k)/log 2, the exact marginal tail of a continued
/// fraction digit under the Gauss measure. Equals 1 at k = 1 and is bounded
/// above by 1/(k log 2).
double digit_tail_prob(std::uint64_t k);

/// P(A_1 = k) = tail(k) - tail(k+1) = log(1 + 1/(k(k+2)))/log 2.
double digit_pmf(std::uint64_t k);

/// The integer threshold m with {A log 2 > n u} = {A >= m}, i.e.
/// m = ceil(n u / log 2). n u / log 2 is never an integer for
/// representable inputs (log 2 is irrational), but when it is close the
/// decision is escalated from double to double-double to arbitrary
/// precision until the comparison n u <=> k log 2 is certified.
std::uint64_t scaled_threshold(std::uint64_t n, double u);

}  // namespace cfx
