#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "cfx/digit_stream.hpp"
#include "cfx/distributions.hpp"

namespace cfx {

/// Shared configuration for a batch of independent digit-sequence trials.
///
/// Reproducibility contract: a trial's randomness depends only on
/// (seed, trial index). Workers pull trials from a shared counter, local
/// accumulator state is integer-valued, and merging is associative, so the
/// statistical output is identical for every worker count.
struct BatchConfig {
    std::uint64_t seed = 1;
    std::uint64_t trials = 1;
    std::uint64_t n_digits = 1;
    int workers = 0;  // 0: CF_EXTREMES_WORKERS env var, else hardware
    std::optional<RefinementPolicy> policy;  // default: sized from n_digits
    SamplerKind sampler = SamplerKind::rejection;

    RefinementPolicy effective_policy() const {
        return policy ? *policy : RefinementPolicy::for_digit_count(n_digits);
    }
};

/// Worker count resolution: explicit > CF_EXTREMES_WORKERS > hardware.
int resolve_workers(int requested);

/// One trial's digest: the digits at or above a kept threshold (order not
/// meaningful) and the top few digits of the whole sequence, descending.
struct TrialDigest {
    std::uint64_t trial = 0;
    bool discarded = false;
    std::vector<std::uint64_t> exceeders;
    std::vector<std::uint64_t> top;
};

/// Runs one digit-sequence trial per index and feeds digests to per-worker
/// copies of `proto`, merged in worker order afterwards. Accum needs:
///   void consume(const TrialDigest&);
///   void merge(const Accum&);
/// consume must keep integer state only for worker-count invariance.
template <class Accum>
Accum run_batch(const BatchConfig& cfg, std::uint64_t keep_threshold, std::size_t top_k,
                Accum proto);

/// Law of the exceedance count #{i <= n : A_i log2 > n u} over Monte Carlo
/// trials, with discarded trials (refinement exhaustion) reported apart.
struct ExceedanceLawResult {
    EmpiricalDist law;
    std::uint64_t discarded = 0;
    std::uint64_t threshold_m = 0;
};

ExceedanceLawResult estimate_exceedance_law(std::uint64_t n, double u, std::uint64_t trials,
                                            std::uint64_t seed, const BatchConfig& base = {});

/// Empirical P(M_n^(k)/n <= u). Internally evaluated as P(count <= k-1)
/// and cross-checked per trial against the k-th largest digit; a mismatch
/// (impossible by duality) throws.
struct KthMaxResult {
    double probability = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    std::uint64_t discarded = 0;
};

KthMaxResult kth_max_cdf_empirical(std::uint64_t n, double u, std::uint64_t k,
                                   std::uint64_t trials, std::uint64_t seed,
                                   const BatchConfig& base = {});

/// Frequencies of the first digit A_1 across trials (values above
/// `value_cap` pooled into the cap bucket).
struct DigitFrequencyResult {
    EmpiricalDist frequencies;
    std::uint64_t discarded = 0;
};

DigitFrequencyResult first_digit_frequencies(std::uint64_t trials, std::uint64_t seed,
                                             std::uint64_t value_cap = 1000,
                                             const BatchConfig& base = {});

// ---- implementation ----

namespace detail {

/// Extracts one trial's digest; reuses buffers across trials.
class TrialRunner {
  public:
    TrialRunner(const BatchConfig& cfg, std::uint64_t keep_threshold, std::size_t top_k)
        : cfg_(cfg), policy_(cfg.effective_policy()), keep_(keep_threshold), top_k_(top_k) {}

    const TrialDigest& run(std::uint64_t trial) {
        digest_.trial = trial;
        digest_.discarded = false;
        digest_.exceeders.clear();
        digest_.top.clear();
        ascending_.clear();
        try {
            DigitStream stream(cfg_.seed, trial, policy_, cfg_.sampler);
            for (std::uint64_t i = 0; i < cfg_.n_digits; ++i) {
                std::uint64_t d = stream.next_digit();
                if (d >= keep_) digest_.exceeders.push_back(d);
                if (top_k_ > 0) push_top(d);
            }
        } catch (const RefinementExhausted&) {
            digest_.discarded = true;
        }
        for (auto it = ascending_.rbegin(); it != ascending_.rend(); ++it)
            digest_.top.push_back(*it);
        return digest_;
    }

  private:
    void push_top(std::uint64_t d) {
        auto pos = std::lower_bound(ascending_.begin(), ascending_.end(), d);
        if (ascending_.size() < top_k_) {
            ascending_.insert(pos, d);
        } else if (d > ascending_.front()) {
            ascending_.erase(ascending_.begin());
            ascending_.insert(std::lower_bound(ascending_.begin(), ascending_.end(), d), d);
        }
    }

    BatchConfig cfg_;
    RefinementPolicy policy_;
    std::uint64_t keep_;
    std::size_t top_k_;
    TrialDigest digest_;
    std::vector<std::uint64_t> ascending_;
};

}  // namespace detail

template <class Accum>
Accum run_batch(const BatchConfig& cfg, std::uint64_t keep_threshold, std::size_t top_k,
                Accum proto) {
    const int workers = resolve_workers(cfg.workers);
    const std::uint64_t chunk = 16;
    std::atomic<std::uint64_t> next{0};
    std::vector<Accum> locals(static_cast<std::size_t>(workers), proto);

    auto body = [&](int w) {
        detail::TrialRunner runner(cfg, keep_threshold, top_k);
        for (;;) {
            std::uint64_t start = next.fetch_add(chunk, std::memory_order_relaxed);
            if (start >= cfg.trials) break;
            std::uint64_t end = std::min(start + chunk, cfg.trials);
            for (std::uint64_t t = start; t < end; ++t)
                locals[static_cast<std::size_t>(w)].consume(runner.run(t));
        }
    };

    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (auto& th : pool) th.join();
    }

    Accum out = std::move(locals[0]);
    for (std::size_t w = 1; w < locals.size(); ++w) out.merge(locals[w]);
    return out;
}

}  // namespace cfx
