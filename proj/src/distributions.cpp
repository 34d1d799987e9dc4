#include "cfx/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cfx {

PoissonLaw::PoissonLaw(double mean) : mean_(mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("PoissonLaw: mean must be finite and >= 0");
}

double PoissonLaw::pmf(std::uint64_t k) const {
    if (mean_ == 0.0) return k == 0 ? 1.0 : 0.0;
    // iterative recurrence pmf(k+1) = pmf(k)*mean/(k+1), anchored at the
    // mode in log space so large means cannot underflow the anchor
    auto kk = static_cast<double>(k);
    if (mean_ < 700.0) {
        double p = std::exp(-mean_);
        for (std::uint64_t i = 0; i < k; ++i) p *= mean_ / static_cast<double>(i + 1);
        return p;
    }
    return std::exp(kk * std::log(mean_) - mean_ - std::lgamma(kk + 1.0));
}

double PoissonLaw::cdf(std::uint64_t k) const {
    if (mean_ == 0.0) return 1.0;
    double p = std::exp(-mean_);
    double acc = p;
    for (std::uint64_t i = 0; i < k; ++i) {
        p *= mean_ / static_cast<double>(i + 1);
        acc += p;
    }
    return std::min(acc, 1.0);
}

std::uint64_t PoissonLaw::tail_cutoff(double eps) const {
    if (mean_ == 0.0) return 0;
    double p = std::exp(-mean_);
    double acc = p;
    std::uint64_t k = 0;
    while (1.0 - acc >= eps) {
        ++k;
        p *= mean_ / static_cast<double>(k);
        acc += p;
        if (k > 100000000) throw std::runtime_error("PoissonLaw: tail cutoff diverged");
    }
    return k;
}

void EmpiricalDist::add(std::uint64_t k, std::uint64_t times) {
    if (k >= counts.size()) counts.resize(k + 1, 0);
    counts[k] += times;
    total_trials += times;
}

void EmpiricalDist::merge(const EmpiricalDist& other) {
    if (other.counts.size() > counts.size()) counts.resize(other.counts.size(), 0);
    for (std::size_t i = 0; i < other.counts.size(); ++i) counts[i] += other.counts[i];
    total_trials += other.total_trials;
}

double EmpiricalDist::probability(std::uint64_t k) const {
    if (total_trials == 0) throw std::logic_error("EmpiricalDist: no trials");
    if (k >= counts.size()) return 0.0;
    return static_cast<double>(counts[k]) / static_cast<double>(total_trials);
}

std::uint64_t EmpiricalDist::max_outcome() const {
    for (std::size_t i = counts.size(); i > 0; --i)
        if (counts[i - 1] > 0) return static_cast<std::uint64_t>(i - 1);
    return 0;
}

void EmpiricalDist::validate() const {
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    if (sum != total_trials) throw std::logic_error("EmpiricalDist: counts do not sum to trials");
}

namespace {

constexpr double kTailEps = 1e-12;

TvResult tv_over(std::uint64_t cutoff, double tail_bound, auto&& pa, auto&& pb) {
    TvResult out;
    out.truncation_point = cutoff;
    out.truncation_error = tail_bound;
    double acc = 0.0;
    for (std::uint64_t k = 0; k <= cutoff; ++k) acc += std::abs(pa(k) - pb(k));
    out.distance = 0.5 * acc;
    return out;
}

}  // namespace

TvResult tv_distance(const PoissonLaw& p, const PoissonLaw& q) {
    std::uint64_t cutoff = std::max(p.tail_cutoff(kTailEps), q.tail_cutoff(kTailEps));
    return tv_over(cutoff, 2.0 * kTailEps, [&](std::uint64_t k) { return p.pmf(k); },
                   [&](std::uint64_t k) { return q.pmf(k); });
}

TvResult tv_distance(const EmpiricalDist& p, const PoissonLaw& q) {
    p.validate();
    std::uint64_t cutoff = std::max(p.max_outcome(), q.tail_cutoff(kTailEps));
    return tv_over(cutoff, kTailEps, [&](std::uint64_t k) { return p.probability(k); },
                   [&](std::uint64_t k) { return q.pmf(k); });
}

TvResult tv_distance(const EmpiricalDist& p, const EmpiricalDist& q) {
    p.validate();
    q.validate();
    std::uint64_t cutoff = std::max(p.max_outcome(), q.max_outcome());
    return tv_over(cutoff, 0.0, [&](std::uint64_t k) { return p.probability(k); },
                   [&](std::uint64_t k) { return q.probability(k); });
}

double limit_kth_max_cdf(double u, std::uint64_t k) {
    if (!(u > 0.0)) throw std::invalid_argument("limit_kth_max_cdf: u must be positive");
    if (k == 0) throw std::invalid_argument("limit_kth_max_cdf: k must be >= 1");
    double inv = 1.0 / u;
    double term = std::exp(-inv);
    double acc = term;
    for (std::uint64_t i = 1; i < k; ++i) {
        term *= inv / static_cast<double>(i);
        acc += term;
    }
    return std::min(acc, 1.0);
}

namespace {

// E|X/T - p| for X ~ Binomial(T, p), by windowed summation around the
// mean with the pmf recurrence (exact up to floating point)
double binomial_mean_abs_dev(std::uint64_t trials, double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    const double T = static_cast<double>(trials);
    const double mu = T * p;
    const auto x0 = static_cast<std::int64_t>(std::llround(mu));
    auto log_pmf = [&](std::int64_t x) {
        double xx = static_cast<double>(x);
        return std::lgamma(T + 1.0) - std::lgamma(xx + 1.0) - std::lgamma(T - xx + 1.0) +
               xx * std::log(p) + (T - xx) * std::log1p(-p);
    };
    double acc = 0.0;
    double pm = std::exp(log_pmf(x0));
    double q = pm;
    for (std::int64_t x = x0; x >= 0 && q > 1e-18 * pm; --x) {
        acc += std::abs(static_cast<double>(x) - mu) * q;
        q *= static_cast<double>(x) / (T - static_cast<double>(x) + 1.0) * (1.0 - p) / p;
    }
    q = pm * (T - static_cast<double>(x0)) / (static_cast<double>(x0) + 1.0) * p / (1.0 - p);
    for (std::int64_t x = x0 + 1; x <= static_cast<std::int64_t>(trials) && q > 1e-18 * pm;
         ++x) {
        acc += (static_cast<double>(x) - mu) * q;
        q *= (T - static_cast<double>(x)) / (static_cast<double>(x) + 1.0) * p / (1.0 - p);
    }
    return acc / T;
}

}  // namespace

double tv_noise_floor(const PoissonLaw& law, std::uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("tv_noise_floor: trials must be >= 1");
    // E tv(empirical, law) when the trials really are drawn from `law`:
    // by linearity it is exactly half the sum of the per-atom binomial
    // mean absolute deviations (multinomial marginals are binomial)
    std::uint64_t cutoff = law.tail_cutoff(kTailEps);
    double acc = 0.0;
    for (std::uint64_t k = 0; k <= cutoff; ++k)
        acc += binomial_mean_abs_dev(trials, law.pmf(k));
    return 0.5 * acc;
}

double tv_deconvolved(const EmpiricalDist& emp, const PoissonLaw& ref) {
    emp.validate();
    const double T = static_cast<double>(emp.total_trials);
    std::uint64_t cutoff = std::max(emp.max_outcome(), ref.tail_cutoff(kTailEps));
    double acc = 0.0;
    for (std::uint64_t k = 0; k <= cutoff; ++k) {
        double ph = emp.probability(k);
        double d = ph - ref.pmf(k);
        double var = ph * (1.0 - ph) / T;
        acc += std::sqrt(std::max(0.0, d * d - var));
    }
    return 0.5 * acc;
}

double tv_deconvolved_floor(const PoissonLaw& law, std::uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("tv_deconvolved_floor: trials must be >= 1");
    // c0 = E sqrt(max(0, Z^2 - 1)), Z standard normal, by quadrature
    static const double c0 = [] {
        double acc = 0.0;
        const int steps = 4000;
        const double zmax = 10.0;
        for (int i = 0; i < steps; ++i) {
            double z = 1.0 + (zmax - 1.0) * (i + 0.5) / steps;
            acc += std::sqrt(z * z - 1.0) * std::exp(-0.5 * z * z);
        }
        return 2.0 * acc * (zmax - 1.0) / steps / std::sqrt(2.0 * std::numbers::pi);
    }();
    std::uint64_t cutoff = law.tail_cutoff(kTailEps);
    double acc = 0.0;
    for (std::uint64_t k = 0; k <= cutoff; ++k) {
        double p = law.pmf(k);
        acc += std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    }
    return 0.5 * c0 * acc;
}

}  // namespace cfx
