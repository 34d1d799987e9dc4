#pragma once

#include <cstdint>
#include <vector>

namespace cfx {

/// Poisson(mean) on the nonnegative integers.
class PoissonLaw {
  public:
    explicit PoissonLaw(double mean);

    double mean() const { return mean_; }
    double pmf(std::uint64_t k) const;
    double cdf(std::uint64_t k) const;
    /// Smallest K with P(X > K) < eps.
    std::uint64_t tail_cutoff(double eps) const;

  private:
    double mean_;
};

/// A finite measure on the nonnegative integers built from Monte Carlo
/// trials: counts[k] occurrences of outcome k over total_trials trials.
struct EmpiricalDist {
    std::vector<std::uint64_t> counts;
    std::uint64_t total_trials = 0;

    void add(std::uint64_t k, std::uint64_t times = 1);
    /// Associative merge for parallel reduction.
    void merge(const EmpiricalDist& other);
    double probability(std::uint64_t k) const;
    std::uint64_t max_outcome() const;
    void validate() const;
};

/// Total variation distance plus the bookkeeping that makes the number
/// reproducible: the support truncation point and a bound on the mass
/// ignored beyond it.
struct TvResult {
    double distance = 0.0;
    double truncation_error = 0.0;
    std::uint64_t truncation_point = 0;
};

/// d_TV = (1/2) sum_k |p(k) - q(k)| over k <= K, with K the smallest point
/// where both laws have tail mass below 1e-12 (and past the empirical max
/// where applicable). The ignored tail goes into truncation_error.
TvResult tv_distance(const PoissonLaw& p, const PoissonLaw& q);
TvResult tv_distance(const EmpiricalDist& p, const PoissonLaw& q);
TvResult tv_distance(const EmpiricalDist& p, const EmpiricalDist& q);

/// P(M_n^(k)/n <= u) in the limit: e^{-1/u} sum_{i<k} u^{-i}/i!, i.e. the
/// Poisson(1/u) cdf at k-1.
double limit_kth_max_cdf(double u, std::uint64_t k);

/// Expected total variation between the empirical law of `trials` draws
/// from `law` and the law itself (the Monte Carlo noise floor). Exact:
/// by linearity it is half the sum of the per-atom binomial mean absolute
/// deviations.
double tv_noise_floor(const PoissonLaw& law, std::uint64_t trials);

/// Noise-deconvolved estimate of tv(true law, ref) from an empirical law:
/// per atom, (p_hat - ref)^2 - Var(p_hat) is unbiased for the squared
/// bias, so (1/2) sum_k sqrt(max(0, (p_hat_k - ref_k)^2 - var_k))
/// estimates the distance without the additive noise floor of the plain
/// empirical TV. Atoms buried under sampling noise contribute ~0 instead
/// of their noise magnitude.
double tv_deconvolved(const EmpiricalDist& emp, const PoissonLaw& ref);

/// Residual resolution of tv_deconvolved when the truth equals ref:
/// (c0/2) sum_k sigma_k with c0 = E sqrt(max(0, Z^2 - 1)) for standard
/// normal Z. Signals below a few multiples of this are not resolvable.
double tv_deconvolved_floor(const PoissonLaw& law, std::uint64_t trials);

}  // namespace cfx
