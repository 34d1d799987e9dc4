#include "cfx/exceedance.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "cfx/digit_law.hpp"

namespace cfx {

ExceedanceSummary exceedance_count(std::span<const std::uint64_t> digits, double u,
                                   std::size_t top_k) {
    if (digits.empty()) throw std::invalid_argument("exceedance_count: digits must be nonempty");
    ExceedanceSummary out;
    out.n = digits.size();
    out.u = u;
    out.threshold_m = scaled_threshold(out.n, u);

    std::vector<std::uint64_t> largest;  // ascending, at most top_k entries
    largest.reserve(top_k + 1);
    for (std::uint64_t d : digits) {
        if (d >= out.threshold_m) ++out.count;
        if (top_k > 0) {
            if (largest.size() < top_k) {
                largest.insert(std::lower_bound(largest.begin(), largest.end(), d), d);
            } else if (d > largest.front()) {
                largest.erase(largest.begin());
                largest.insert(std::lower_bound(largest.begin(), largest.end(), d), d);
            }
        }
    }
    out.top_k.reserve(largest.size());
    for (auto it = largest.rbegin(); it != largest.rend(); ++it)
        out.top_k.push_back(static_cast<double>(*it) * std::numbers::ln2);
    return out;
}

}  // namespace cfx
