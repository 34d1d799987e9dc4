#include "doctest.h"

#include "cfx/distributions.hpp"

#include <cmath>
#include <tuple>
#include <random>
#include <initializer_list>
#include <stdexcept>

using namespace cfx;

TEST_CASE("poisson pmf matches the log-gamma formula") {
    for (double lambda : {0.1, 0.5, 1.0, 5.0, 50.0, 699.0, 1200.0}) {
        PoissonLaw law(lambda);
        for (std::uint64_t k : {0ULL, 1ULL, 2ULL, 5ULL, 20ULL, 100ULL, 800ULL, 1300ULL}) {
            double direct = std::exp(static_cast<double>(k) * std::log(lambda) - lambda -
                                     std::lgamma(static_cast<double>(k) + 1.0));
            CHECK(law.pmf(k) == doctest::Approx(direct).epsilon(1e-11));
        }
    }
    PoissonLaw zero(0.0);
    CHECK(zero.pmf(0) == 1.0);
    CHECK(zero.pmf(3) == 0.0);
    CHECK_THROWS_AS(PoissonLaw(-1.0), std::invalid_argument);
}

TEST_CASE("poisson cdf and tail cutoff") {
    PoissonLaw law(2.5);
    double acc = 0.0;
    for (std::uint64_t k = 0; k <= 40; ++k) {
        acc += law.pmf(k);
        CHECK(law.cdf(k) == doctest::Approx(acc).epsilon(1e-12));
    }
    std::uint64_t cut = law.tail_cutoff(1e-12);
    CHECK(1.0 - law.cdf(cut) < 1e-12);
    CHECK(cut > 2);  // not trivially zero
}

TEST_CASE("empirical distribution bookkeeping") {
    EmpiricalDist d;
    d.add(0, 3);
    d.add(2);
    d.add(5, 6);
    CHECK(d.total_trials == 10);
    CHECK(d.probability(0) == doctest::Approx(0.3));
    CHECK(d.probability(1) == 0.0);
    CHECK(d.probability(99) == 0.0);
    CHECK(d.max_outcome() == 5);
    EmpiricalDist e;
    e.add(1, 10);
    d.merge(e);
    CHECK(d.total_trials == 20);
    CHECK(d.probability(1) == doctest::Approx(0.5));
    d.validate();
}

TEST_CASE("tv distance basics") {
    CHECK(tv_distance(PoissonLaw(1.0), PoissonLaw(1.0)).distance == 0.0);
    // point mass at 0 vs Poi(1): distance is 1 - e^-1
    EmpiricalDist point;
    point.add(0, 1000);
    TvResult r = tv_distance(point, PoissonLaw(1.0));
    CHECK(r.distance == doctest::Approx(0.6321205588285577).epsilon(1e-9));
    CHECK(r.truncation_error <= 2e-12);
    // symmetry for the poisson pair
    TvResult a = tv_distance(PoissonLaw(0.7), PoissonLaw(2.3));
    TvResult b = tv_distance(PoissonLaw(2.3), PoissonLaw(0.7));
    CHECK(a.distance == doctest::Approx(b.distance).epsilon(1e-15));
    CHECK(a.distance > 0.0);
    CHECK(a.distance <= 1.0);
}

TEST_CASE("tv distance between poisson laws is lipschitz in the mean") {
    for (int i = 1; i <= 20; ++i) {
        for (int j = 1; j <= 20; ++j) {
            double l1 = 0.25 * i, l2 = 0.25 * j;
            TvResult r = tv_distance(PoissonLaw(l1), PoissonLaw(l2));
            CHECK(r.distance <= std::abs(l1 - l2) + 1e-12);
        }
    }
}

TEST_CASE("tv distance satisfies the triangle inequality") {
    for (auto [a, b, c] : {std::tuple{0.5, 1.0, 2.0}, std::tuple{1.0, 3.0, 1.5},
                           std::tuple{0.25, 4.75, 2.0}}) {
        double ab = tv_distance(PoissonLaw(a), PoissonLaw(b)).distance;
        double bc = tv_distance(PoissonLaw(b), PoissonLaw(c)).distance;
        double ac = tv_distance(PoissonLaw(a), PoissonLaw(c)).distance;
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("empirical vs empirical tv is exact on the joint support") {
    EmpiricalDist p, q;
    p.add(0, 5);
    p.add(1, 5);
    q.add(0, 10);
    TvResult r = tv_distance(p, q);
    CHECK(r.distance == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.truncation_error == 0.0);
}

TEST_CASE("limiting kth-max cdf") {
    CHECK(limit_kth_max_cdf(1.0, 1) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK(limit_kth_max_cdf(1.0, 2) == doctest::Approx(0.7357588823428847).epsilon(1e-14));
    CHECK(limit_kth_max_cdf(1.0, 3) == doctest::Approx(0.9196986029286058).epsilon(1e-14));
    CHECK(limit_kth_max_cdf(1e9, 1) == doctest::Approx(1.0).epsilon(1e-9));
    // independent route: sum of exp(-1/u + i log(1/u) - lgamma(i+1))
    for (double u : {0.5, 1.0, 1.7, 4.0}) {
        for (std::uint64_t k : {1ULL, 2ULL, 3ULL, 7ULL}) {
            double inv = 1.0 / u;
            double direct = 0.0;
            for (std::uint64_t i = 0; i < k; ++i)
                direct += std::exp(-inv + static_cast<double>(i) * std::log(inv) -
                                   std::lgamma(static_cast<double>(i) + 1.0));
            CHECK(limit_kth_max_cdf(u, k) == doctest::Approx(direct).epsilon(1e-12));
            // equals the Poisson(1/u) cdf at k-1
            CHECK(limit_kth_max_cdf(u, k) ==
                  doctest::Approx(PoissonLaw(inv).cdf(k - 1)).epsilon(1e-12));
        }
    }
    // monotone in u and in k
    CHECK(limit_kth_max_cdf(0.5, 1) < limit_kth_max_cdf(1.0, 1));
    CHECK(limit_kth_max_cdf(1.0, 1) < limit_kth_max_cdf(1.0, 2));
}

TEST_CASE("monte carlo tv noise floor scales like 1/sqrt(trials)") {
    PoissonLaw law(1.0);
    double f1 = tv_noise_floor(law, 10000);
    double f4 = tv_noise_floor(law, 40000);
    CHECK(f1 > 0.0);
    CHECK(f1 / f4 == doctest::Approx(2.0).epsilon(0.02));  // asymptotic halving
    CHECK(tv_noise_floor(law, 100000) < 0.01);
}

TEST_CASE("deconvolved tv removes the noise floor and recovers real signal") {
    const std::uint64_t trials = 200000;
    PoissonLaw ref(2.0);
    std::mt19937_64 gen(777);
    // truth == ref: the deconvolved estimate collapses toward zero
    double at_truth = 0.0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        EmpiricalDist emp;
        std::poisson_distribution<long> draw(2.0);
        for (std::uint64_t t = 0; t < trials; ++t)
            emp.add(static_cast<std::uint64_t>(draw(gen)));
        at_truth += tv_deconvolved(emp, ref);
    }
    at_truth /= reps;
    double plain_floor = tv_noise_floor(ref, trials);
    double deconv_floor = tv_deconvolved_floor(ref, trials);
    CHECK(deconv_floor < 0.5 * plain_floor);
    CHECK(at_truth < 3.0 * deconv_floor);
    CHECK(at_truth < 0.6 * plain_floor);

    // truth visibly away from ref: estimate tracks the true distance
    PoissonLaw truth(2.2);
    double true_tv = tv_distance(truth, ref).distance;
    double shifted = 0.0;
    for (int r = 0; r < reps; ++r) {
        EmpiricalDist emp;
        std::poisson_distribution<long> draw(2.2);
        for (std::uint64_t t = 0; t < trials; ++t)
            emp.add(static_cast<std::uint64_t>(draw(gen)));
        shifted += tv_deconvolved(emp, ref);
    }
    shifted /= reps;
    CHECK(shifted == doctest::Approx(true_tv).epsilon(0.10));
}

TEST_CASE("noise floor equals the simulated expected tv") {
    // draw empirical laws from the reference itself; the mean observed tv
    // must match the deterministic floor
    PoissonLaw law(1.5);
    const std::uint64_t trials = 4000;
    const int reps = 300;
    std::mt19937_64 gen(4242);
    double mean_tv = 0.0;
    for (int r = 0; r < reps; ++r) {
        EmpiricalDist emp;
        std::poisson_distribution<long> draw(1.5);
        for (std::uint64_t t = 0; t < trials; ++t)
            emp.add(static_cast<std::uint64_t>(draw(gen)));
        mean_tv += tv_distance(emp, law).distance;
    }
    mean_tv /= reps;
    double floor = tv_noise_floor(law, trials);
    // reps = 300 Monte Carlo replicates: ~3 sigma of the mean is ~0.0004
    CHECK(mean_tv == doctest::Approx(floor).epsilon(0.03));
}
