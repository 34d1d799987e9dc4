#include "cfx/point_process.hpp"

#include <cmath>
#include <stdexcept>

#include "cfx/digit_law.hpp"

namespace cfx {

double ScaledInterval::nu_mass() const {
    if (!(lo > 0.0)) throw std::invalid_argument("ScaledInterval: lo must be positive");
    double out = 1.0 / lo;
    if (hi) {
        if (!(*hi > lo)) throw std::invalid_argument("ScaledInterval: need lo < hi");
        out -= 1.0 / *hi;
    }
    return out;
}

IntervalUnion::IntervalUnion(std::vector<ScaledInterval> parts) : intervals(std::move(parts)) {
    if (intervals.empty()) throw std::invalid_argument("IntervalUnion: empty");
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        (void)intervals[i].nu_mass();  // validates each interval
        if (i + 1 < intervals.size()) {
            if (!intervals[i].hi)
                throw std::invalid_argument("IntervalUnion: unbounded interval must be last");
            if (!(*intervals[i].hi <= intervals[i + 1].lo))
                throw std::invalid_argument("IntervalUnion: intervals must be disjoint ascending");
        }
    }
}

double IntervalUnion::nu_mass() const {
    double total = 0.0;
    for (const auto& iv : intervals) total += iv.nu_mass();
    return total;
}

namespace {

// digit range [m_lo, m_hi) realizing {A log2/n in (u, v]}; m_hi 0 = inf
struct DigitRange {
    std::uint64_t m_lo = 1;
    std::uint64_t m_hi = 0;
};

DigitRange to_digit_range(std::uint64_t n, const ScaledInterval& iv) {
    DigitRange r;
    r.m_lo = scaled_threshold(n, iv.lo);
    r.m_hi = iv.hi ? scaled_threshold(n, *iv.hi) : 0;
    return r;
}

double finite_n_intensity(std::uint64_t n, const DigitRange& r) {
    if (r.m_hi != 0 && r.m_hi <= r.m_lo) return 0.0;  // discretization collapse
    double mass = digit_tail_prob(r.m_lo);
    if (r.m_hi != 0) mass -= digit_tail_prob(r.m_hi);
    return static_cast<double>(n) * mass;
}

struct MeanAccum {
    DigitRange range;
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    std::uint64_t done = 0;
    std::uint64_t discarded = 0;

    void consume(const TrialDigest& d) {
        if (d.discarded) {
            ++discarded;
            return;
        }
        ++done;
        std::uint64_t c = 0;
        for (auto v : d.exceeders)
            c += (v >= range.m_lo && (range.m_hi == 0 || v < range.m_hi));
        sum += c;
        sum_sq += c * c;
    }
    void merge(const MeanAccum& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        done += o.done;
        discarded += o.discarded;
    }
};

struct AvoidAccum {
    std::vector<DigitRange> ranges;
    std::uint64_t empty_count = 0;
    std::uint64_t done = 0;
    std::uint64_t discarded = 0;

    void consume(const TrialDigest& d) {
        if (d.discarded) {
            ++discarded;
            return;
        }
        ++done;
        for (auto v : d.exceeders) {
            for (const auto& r : ranges) {
                if (v >= r.m_lo && (r.m_hi == 0 || v < r.m_hi)) return;  // point landed
            }
        }
        ++empty_count;
    }
    void merge(const AvoidAccum& o) {
        empty_count += o.empty_count;
        done += o.done;
        discarded += o.discarded;
    }
};

}  // namespace

MeanMeasureResult mean_measure_check(std::uint64_t n, const ScaledInterval& interval,
                                     std::uint64_t trials, std::uint64_t seed,
                                     const BatchConfig& base) {
    if (trials == 0) throw std::invalid_argument("mean_measure_check: trials must be >= 1");
    BatchConfig cfg = base;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.n_digits = n;
    MeanAccum proto;
    proto.range = to_digit_range(n, interval);
    MeanAccum acc = run_batch(cfg, proto.range.m_lo, 0, proto);

    MeanMeasureResult out;
    out.trials = acc.done;
    out.discarded = acc.discarded;
    out.m_lo = proto.range.m_lo;
    out.m_hi = proto.range.m_hi;
    out.expected_finite_n = finite_n_intensity(n, proto.range);
    out.expected_limit = interval.nu_mass();
    if (acc.done > 0) {
        double mean = static_cast<double>(acc.sum) / static_cast<double>(acc.done);
        double meansq = static_cast<double>(acc.sum_sq) / static_cast<double>(acc.done);
        out.empirical_mean = mean;
        double var = std::max(0.0, meansq - mean * mean);
        out.stderr_ = std::sqrt(var / static_cast<double>(acc.done));
    }
    return out;
}

AvoidanceResult avoidance_probability_check(std::uint64_t n, const IntervalUnion& region,
                                            std::uint64_t trials, std::uint64_t seed,
                                            const BatchConfig& base) {
    if (trials == 0)
        throw std::invalid_argument("avoidance_probability_check: trials must be >= 1");
    BatchConfig cfg = base;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.n_digits = n;
    AvoidAccum proto;
    std::uint64_t keep = UINT64_MAX;
    double finite_intensity = 0.0;
    for (const auto& iv : region.intervals) {
        DigitRange r = to_digit_range(n, iv);
        finite_intensity += finite_n_intensity(n, r);
        keep = std::min(keep, r.m_lo);
        proto.ranges.push_back(r);
    }
    AvoidAccum acc = run_batch(cfg, keep, 0, proto);

    AvoidanceResult out;
    out.trials = acc.done;
    out.discarded = acc.discarded;
    out.expected_limit = std::exp(-region.nu_mass());
    out.expected_finite_n = std::exp(-finite_intensity);
    if (acc.done > 0) {
        double p = static_cast<double>(acc.empty_count) / static_cast<double>(acc.done);
        out.empirical = p;
        out.stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(acc.done));
    }
    return out;
}

}  // namespace cfx
