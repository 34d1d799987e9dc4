#include "cfx/monte_carlo.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "cfx/digit_law.hpp"

namespace cfx {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CF_EXTREMES_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

struct CountAccum {
    std::uint64_t threshold_m = 0;
    EmpiricalDist law;
    std::uint64_t discarded = 0;

    void consume(const TrialDigest& d) {
        if (d.discarded) {
            ++discarded;
            return;
        }
        std::uint64_t count = 0;
        for (auto v : d.exceeders) count += (v >= threshold_m);
        law.add(count);
    }
    void merge(const CountAccum& o) {
        law.merge(o.law);
        discarded += o.discarded;
    }
};

struct KthMaxAccum {
    std::uint64_t threshold_m = 0;
    std::uint64_t k = 1;
    std::uint64_t below_by_count = 0;
    std::uint64_t below_by_top = 0;
    std::uint64_t done = 0;
    std::uint64_t discarded = 0;

    void consume(const TrialDigest& d) {
        if (d.discarded) {
            ++discarded;
            return;
        }
        ++done;
        std::uint64_t count = 0;
        for (auto v : d.exceeders) count += (v >= threshold_m);
        bool by_count = count <= k - 1;
        // duality: M^(k)/n <= u  <=>  the k-th largest digit is < m
        bool by_top = d.top.size() < k || d.top[k - 1] < threshold_m;
        if (by_count != by_top)
            throw std::logic_error("kth_max_cdf_empirical: duality cross-check failed");
        below_by_count += by_count;
        below_by_top += by_top;
    }
    void merge(const KthMaxAccum& o) {
        below_by_count += o.below_by_count;
        below_by_top += o.below_by_top;
        done += o.done;
        discarded += o.discarded;
    }
};

struct FirstDigitAccum {
    std::uint64_t cap = 1000;
    EmpiricalDist freq;
    std::uint64_t discarded = 0;

    void consume(const TrialDigest& d) {
        if (d.discarded) {
            ++discarded;
            return;
        }
        std::uint64_t v = d.exceeders.empty() ? 0 : d.exceeders[0];
        freq.add(std::min(v, cap));
    }
    void merge(const FirstDigitAccum& o) {
        freq.merge(o.freq);
        discarded += o.discarded;
    }
};

}  // namespace

ExceedanceLawResult estimate_exceedance_law(std::uint64_t n, double u, std::uint64_t trials,
                                            std::uint64_t seed, const BatchConfig& base) {
    if (trials == 0) throw std::invalid_argument("estimate_exceedance_law: trials must be >= 1");
    BatchConfig cfg = base;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.n_digits = n;
    CountAccum proto;
    proto.threshold_m = scaled_threshold(n, u);
    CountAccum result = run_batch(cfg, proto.threshold_m, 0, proto);
    return ExceedanceLawResult{std::move(result.law), result.discarded, proto.threshold_m};
}

KthMaxResult kth_max_cdf_empirical(std::uint64_t n, double u, std::uint64_t k,
                                   std::uint64_t trials, std::uint64_t seed,
                                   const BatchConfig& base) {
    if (k == 0 || k > n) throw std::invalid_argument("kth_max_cdf_empirical: need 1 <= k <= n");
    if (trials == 0) throw std::invalid_argument("kth_max_cdf_empirical: trials must be >= 1");
    BatchConfig cfg = base;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.n_digits = n;
    KthMaxAccum proto;
    proto.threshold_m = scaled_threshold(n, u);
    proto.k = k;
    KthMaxAccum result = run_batch(cfg, proto.threshold_m, static_cast<std::size_t>(k), proto);
    KthMaxResult out;
    out.successes = result.below_by_count;
    out.trials = result.done;
    out.discarded = result.discarded;
    out.probability =
        result.done == 0 ? 0.0
                         : static_cast<double>(result.below_by_count) / static_cast<double>(result.done);
    return out;
}

DigitFrequencyResult first_digit_frequencies(std::uint64_t trials, std::uint64_t seed,
                                             std::uint64_t value_cap, const BatchConfig& base) {
    if (trials == 0) throw std::invalid_argument("first_digit_frequencies: trials must be >= 1");
    BatchConfig cfg = base;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.n_digits = 1;
    FirstDigitAccum proto;
    proto.cap = value_cap;
    FirstDigitAccum result = run_batch(cfg, 1, 0, proto);  // keep every digit
    return DigitFrequencyResult{std::move(result.freq), result.discarded};
}

}  // namespace cfx
