#include "cfx/chen_stein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cfx/digit_law.hpp"
#include "cfx/errors.hpp"

namespace cfx {

double MixingModel::psi(double gap) const { return C * std::pow(theta, -gap); }

void MixingModel::validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("MixingModel: C must be > 0");
    if (!(theta > 1.0) || !std::isfinite(theta))
        throw std::invalid_argument("MixingModel: theta must be > 1");
}

DependencySpec DependencySpec::homogeneous(std::int64_t n, double p, std::int64_t radius,
                                           double pair_value, double b3_value) {
    if (n <= 0) throw std::invalid_argument("DependencySpec: index_count must be positive");
    if (radius < 0) throw std::invalid_argument("DependencySpec: radius must be >= 0");
    DependencySpec spec;
    spec.index_count = n;
    spec.marginal = [p](std::int64_t) { return p; };
    spec.neighborhood = [n, radius](std::int64_t a) {
        std::vector<std::int64_t> out;
        std::int64_t lo = std::max<std::int64_t>(0, a - radius);
        std::int64_t hi = std::min<std::int64_t>(n - 1, a + radius);
        out.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (std::int64_t b = lo; b <= hi; ++b) out.push_back(b);
        return out;
    };
    spec.pair_expectation = [pair_value](std::int64_t, std::int64_t) { return pair_value; };
    spec.b3_term = [b3_value](std::int64_t) { return b3_value; };
    spec.homogeneous_shape = true;
    spec.homog_p = p;
    spec.homog_radius = radius;
    spec.homog_pair = pair_value;
    spec.homog_b3 = b3_value;
    return spec;
}

namespace {

double theorem_multiplier(const std::vector<double>& lambdas) {
    double min_lambda = std::numeric_limits<double>::infinity();
    for (double l : lambdas) min_lambda = std::min(min_lambda, l);
    if (!(min_lambda > 0.0)) return 2.0;
    return std::min(2.0, 2.8 / std::sqrt(min_lambda));
}

// sum over a of |B_a| for windows [a-r, a+r] clipped to [0, n-1]
std::int64_t homogeneous_window_total(std::int64_t n, std::int64_t r) {
    if (r >= n - 1) return n * n;  // every window is everything
    // n interior windows of size 2r+1, minus the clipped edges:
    // sum_a |B_a| = n(2r+1) - r(r+1)
    return n * (2 * r + 1) - r * (r + 1);
}

ChenSteinBounds compute_homogeneous(const DependencySpec& spec) {
    ChenSteinBounds out;
    const std::int64_t n = spec.index_count;
    const double p = spec.homog_p;
    const std::int64_t S = homogeneous_window_total(n, spec.homog_radius);
    out.b1 = p * p * static_cast<double>(S);
    out.b2 = spec.homog_pair * static_cast<double>(S - n);
    out.b3 = spec.homog_b3 * static_cast<double>(n);
    out.lambdas = {p * static_cast<double>(n)};
    out.multiplier = theorem_multiplier(out.lambdas);
    out.total = out.multiplier * (2.0 * out.b1 + 2.0 * out.b2 + out.b3);
    out.mode = spec.pair_kind == DependencySpec::PairKind::empirical
                   ? ChenSteinBounds::Mode::empirical
                   : ChenSteinBounds::Mode::analytic;
    return out;
}

}  // namespace

ChenSteinBounds compute_b_terms(const DependencySpec& spec) {
    const std::int64_t n = spec.index_count;
    if (n <= 0) throw InvalidSpec("compute_b_terms: empty index set");
    if (!spec.marginal || !spec.neighborhood)
        throw InvalidSpec("compute_b_terms: marginal and neighborhood are required");

    // validate the partition: disjoint blocks covering 0..n-1
    std::vector<std::vector<std::int64_t>> blocks = spec.partition;
    if (blocks.empty()) {
        blocks.emplace_back();
        blocks.back().reserve(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) blocks.back().push_back(i);
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (const auto& blk : blocks) {
        if (blk.empty()) throw InvalidSpec("compute_b_terms: empty block");
        for (auto i : blk) {
            if (i < 0 || i >= n) throw InvalidSpec("compute_b_terms: block index out of range");
            if (seen[static_cast<std::size_t>(i)])
                throw InvalidSpec("compute_b_terms: blocks overlap");
            seen[static_cast<std::size_t>(i)] = 1;
        }
    }
    for (char s : seen)
        if (!s) throw InvalidSpec("compute_b_terms: blocks do not cover the index set");

    if (spec.homogeneous_shape && blocks.size() == 1) {
        ChenSteinBounds fast = compute_homogeneous(spec);
        return fast;
    }

    ChenSteinBounds out;
    for (std::int64_t a = 0; a < n; ++a) {
        const double pa = spec.marginal(a);
        if (!(pa >= 0.0) || pa > 1.0) throw InvalidSpec("compute_b_terms: marginal out of [0,1]");
        auto hood = spec.neighborhood(a);
        bool self_seen = false;
        for (auto b : hood) {
            if (b < 0 || b >= n) throw InvalidSpec("compute_b_terms: neighbor out of range");
            if (b == a) self_seen = true;
            out.b1 += pa * spec.marginal(b);
            if (b != a) {
                if (!spec.pair_expectation)
                    throw InvalidSpec("compute_b_terms: pair_expectation required");
                out.b2 += spec.pair_expectation(a, b);
            }
        }
        if (!self_seen) throw InvalidSpec("compute_b_terms: neighborhood must contain its index");
        if (spec.b3_term) out.b3 += spec.b3_term(a);
    }
    out.lambdas.reserve(blocks.size());
    for (const auto& blk : blocks) {
        double lam = 0.0;
        for (auto i : blk) lam += spec.marginal(i);
        out.lambdas.push_back(lam);
    }
    out.multiplier = theorem_multiplier(out.lambdas);
    out.total = out.multiplier * (2.0 * out.b1 + 2.0 * out.b2 + out.b3);
    out.mode = spec.pair_kind == DependencySpec::PairKind::empirical
                   ? ChenSteinBounds::Mode::empirical
                   : ChenSteinBounds::Mode::analytic;
    return out;
}

double solve_window_radius(double theta, std::uint64_t n) {
    if (!(theta > 1.0)) throw std::invalid_argument("solve_window_radius: theta must be > 1");
    if (n == 0) throw std::invalid_argument("solve_window_radius: n must be >= 1");
    const double target = static_cast<double>(n);
    auto f = [theta](double l) { return l * std::pow(theta, l); };
    double lo = 0.0;
    double hi = std::log(target) / std::log(theta) + 1.0;
    if (hi < 1.0) hi = 1.0;
    while (f(hi) < target) hi *= 2.0;  // safety; the bracket above suffices
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

ChenSteinBounds analytic_bounds_cf(std::uint64_t n, double u, const MixingModel& mixing) {
    mixing.validate();
    if (!(u > 0.0)) throw std::invalid_argument("analytic_bounds_cf: u must be positive");
    const double ln = solve_window_radius(mixing.theta, n);
    const double nn = static_cast<double>(n);
    ChenSteinBounds out;
    out.b1 = 2.0 * ln / (nn * u * u);
    out.b2 = 2.0 * (1.0 + mixing.C) * ln / (nn * u * u);
    out.b3 = mixing.C * ln / (nn * u);
    out.lambdas = {nn * digit_tail_prob(scaled_threshold(n, u))};
    out.multiplier = 2.0;  // the conservative constant used by the proof
    out.total = out.multiplier * (2.0 * out.b1 + 2.0 * out.b2 + out.b3);
    out.mode = ChenSteinBounds::Mode::analytic;
    return out;
}

double poisson_mean_gap_bound(std::uint64_t n, double u) {
    if (n == 0 || !(u > 0.0))
        throw std::invalid_argument("poisson_mean_gap_bound: need n >= 1 and u > 0");
    return 3.0 * std::numbers::ln2 / (2.0 * u * u * static_cast<double>(n));
}

double poisson_mean_gap_exact(std::uint64_t n, double u) {
    std::uint64_t m = scaled_threshold(n, u);
    double finite_mean = static_cast<double>(n) * digit_tail_prob(m);
    return std::abs(finite_mean - 1.0 / u);
}

double rate_constant(const MixingModel& mixing) {
    mixing.validate();
    return 16.0 + 10.0 * mixing.C + 1.5 * std::numbers::ln2;
}

double rate_bound(std::uint64_t n, double delta, const MixingModel& mixing) {
    if (!(delta > 0.0)) throw std::invalid_argument("rate_bound: delta must be positive");
    const double ln = solve_window_radius(mixing.theta, n);
    return rate_constant(mixing) / std::min(delta, delta * delta) * ln / static_cast<double>(n);
}

namespace {

struct PairAccum {
    std::uint64_t m = 0;
    std::uint64_t gap = 1;
    std::uint64_t hits = 0;
    std::uint64_t done = 0;
    std::uint64_t discarded = 0;

    void consume(const TrialDigest& d) {
        if (d.discarded) {
            ++discarded;
            return;
        }
        ++done;
        // exceeders holds all digits (keep threshold 1) in sequence order
        if (d.exceeders.size() > gap && d.exceeders[0] >= m && d.exceeders[gap] >= m) ++hits;
    }
    void merge(const PairAccum& o) {
        hits += o.hits;
        done += o.done;
        discarded += o.discarded;
    }
};

}  // namespace

PairEstimate empirical_pair_expectation(std::uint64_t n, double u, std::uint64_t gap,
                                        std::uint64_t trials, std::uint64_t seed,
                                        const BatchConfig& base) {
    if (gap == 0 || gap + 1 > n)
        throw std::invalid_argument("empirical_pair_expectation: need 1 <= gap, gap+1 <= n");
    if (trials == 0) throw std::invalid_argument("empirical_pair_expectation: trials must be >= 1");
    BatchConfig cfg = base;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.n_digits = gap + 1;  // stationarity: positions 1 and 1+gap suffice
    PairAccum proto;
    proto.m = scaled_threshold(n, u);
    proto.gap = gap;
    PairAccum result = run_batch(cfg, 1, 0, proto);
    PairEstimate out;
    out.hits = result.hits;
    out.trials = result.done;
    out.discarded = result.discarded;
    if (result.done > 0) {
        double p = static_cast<double>(result.hits) / static_cast<double>(result.done);
        out.estimate = p;
        out.stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(result.done));
    }
    return out;
}

}  // namespace cfx
