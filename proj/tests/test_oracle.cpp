#include "doctest.h"

#include "cfx/digit_law.hpp"
#include "cfx/digit_stream.hpp"
#include "cfx/errors.hpp"
#include "cfx/oracle.hpp"

#include <array>
#include <cmath>
#include <initializer_list>
#include <vector>

using namespace cfx;
using namespace cfx::oracle;

TEST_CASE("cylinder intervals of short digit blocks") {
    auto c1 = cylinder_interval(std::array<std::uint64_t, 1>{1});
    CHECK(c1.first == Rational(1L, 2L));
    CHECK(c1.second == Rational(1L, 1L));
    auto c2 = cylinder_interval(std::array<std::uint64_t, 1>{2});
    CHECK(c2.first == Rational(1L, 3L));
    CHECK(c2.second == Rational(1L, 2L));
    auto c24 = cylinder_interval(std::array<std::uint64_t, 2>{2, 4});
    CHECK(c24.first == Rational(4L, 9L));
    CHECK(c24.second == Rational(5L, 11L));
    // digits of the midpoint of the cylinder start with the block
    Rational mid = (c24.first + c24.second) * Rational(1L, 2L);
    auto ds = digits_of_rational(mid, 2);
    CHECK(ds[0] == 2);
    CHECK(ds[1] == 4);
}

TEST_CASE("cylinder measure equals the digit pmf") {
    for (std::uint64_t a = 1; a <= 100; ++a) {
        auto c = cylinder_interval(std::array<std::uint64_t, 1>{a});
        double measured = gauss_measure_of_interval(c.first, c.second);
        CHECK(measured == doctest::Approx(digit_pmf(a)).epsilon(1e-12));
    }
}

TEST_CASE("probability brackets for single-position constraints") {
    for (std::uint64_t m : {2ULL, 3ULL, 9ULL, 100ULL}) {
        std::array<CylinderConstraint, 1> cs{CylinderConstraint::at_least(m)};
        ProbBracket p = probability_of(cs);
        double expected = digit_tail_prob(m);
        CHECK(p.lo <= expected);
        CHECK(expected <= p.hi);
        CHECK(p.half_width() < 1e-9);  // the digit tail telescopes exactly
    }
    std::array<CylinderConstraint, 1> all{CylinderConstraint::any()};
    ProbBracket one = probability_of(all);
    CHECK(one.mid() == doctest::Approx(1.0).epsilon(1e-12));
    std::array<CylinderConstraint, 1> small{CylinderConstraint::at_most(2)};
    ProbBracket ps = probability_of(small);
    CHECK(ps.mid() == doctest::Approx(1.0 - digit_tail_prob(3)).epsilon(1e-12));
}

TEST_CASE("probability of an exact digit block matches its cylinder measure") {
    std::array<CylinderConstraint, 2> cs{CylinderConstraint::exactly(2),
                                         CylinderConstraint::exactly(4)};
    ProbBracket p = probability_of(cs);
    auto cyl = cylinder_interval(std::array<std::uint64_t, 2>{2, 4});
    double measure = gauss_measure_of_interval(cyl.first, cyl.second);
    CHECK(p.lo <= measure + 1e-15);
    CHECK(measure <= p.hi + 1e-15);
    CHECK(p.half_width() < 1e-12);

    // three positions via an independent route as well
    std::array<CylinderConstraint, 3> c3{CylinderConstraint::exactly(1),
                                         CylinderConstraint::exactly(2),
                                         CylinderConstraint::exactly(3)};
    auto cyl3 = cylinder_interval(std::array<std::uint64_t, 3>{1, 2, 3});
    ProbBracket p3 = probability_of(c3);
    double m3 = gauss_measure_of_interval(cyl3.first, cyl3.second);
    CHECK(p3.lo <= m3 + 1e-15);
    CHECK(m3 <= p3.hi + 1e-15);
}

TEST_CASE("joint exceedance via summed explicit cylinders (independent route)") {
    // P(A_1 >= m, A_2 >= m) ~ sum over a,b in [m, cap] of the cylinder
    // measures, plus a crude tail allowance; the engine's bracket must sit
    // inside that window
    const std::uint64_t m = 3;
    std::array<CylinderConstraint, 2> cs{CylinderConstraint::at_least(m),
                                         CylinderConstraint::at_least(m)};
    ProbBracket p = probability_of(cs, 4000);
    const std::uint64_t cap = 400;
    double partial = 0.0;
    for (std::uint64_t a = m; a <= cap; ++a) {
        for (std::uint64_t b = m; b <= cap; ++b) {
            auto cyl = cylinder_interval(std::array<std::uint64_t, 2>{a, b});
            partial += gauss_measure_of_interval(cyl.first, cyl.second);
        }
    }
    // dropped mass: first digit beyond cap, or second digit beyond cap
    double slack = digit_tail_prob(cap) * 2.0;
    CHECK(p.mid() >= partial - 1e-9);
    CHECK(p.mid() <= partial + slack);
    CHECK(p.half_width() < 1e-7);
}

TEST_CASE("exact exceedance law for n = 1") {
    ExactLaw law = exact_exceedance_distribution(1, 1.0);
    CHECK(law.threshold_m == 2);
    REQUIRE(law.probabilities.size() == 2);
    // P(count = 1) = P(A_1 >= 2) = tail(2), P(count = 0) = pmf(1)
    CHECK(law.probabilities[1] == doctest::Approx(0.5849625007211562).epsilon(1e-10));
    CHECK(law.probabilities[0] == doctest::Approx(0.4150374992788438).epsilon(1e-10));
    CHECK(law.error_bound <= 1e-6);

    // m = 1: every digit exceeds
    ExactLaw certain = exact_exceedance_distribution(1, 0.5);
    CHECK(certain.threshold_m == 1);
    CHECK(certain.probabilities[1] == 1.0);
    CHECK(certain.error_bound == 0.0);
}

TEST_CASE("exact exceedance laws sum to one") {
    for (std::uint64_t n : {1ULL, 2ULL, 3ULL}) {
        for (double u : {0.5, 1.0, 2.0}) {
            ExactLaw law = exact_exceedance_distribution(n, u);
            double sum = 0.0;
            for (double p : law.probabilities) {
                CHECK(p >= -1e-12);
                sum += p;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(5e-6));
            CHECK(law.error_bound <= 1e-6);
        }
    }
}

TEST_CASE("exact law n = 2 against the adjacent-pair identity") {
    // P(count = 2) = P(A_1 >= m, A_2 >= m) computed through the generic
    // engine twice: once as the count law, once as a direct constraint
    ExactLaw law = exact_exceedance_distribution(2, 1.0);
    std::array<CylinderConstraint, 2> cs{CylinderConstraint::at_least(law.threshold_m),
                                         CylinderConstraint::at_least(law.threshold_m)};
    ProbBracket direct = probability_of(cs);
    CHECK(law.probabilities[2] == doctest::Approx(direct.mid()).epsilon(1e-9));
    // and P(count = 0) complements through the marginal: inclusion-exclusion
    double t = digit_tail_prob(law.threshold_m);
    CHECK(law.probabilities[0] ==
          doctest::Approx(1.0 - 2.0 * t + direct.mid()).epsilon(1e-8));
}

TEST_CASE("coarse truncation is refused") {
    CHECK_THROWS_AS(probability_of(std::array<CylinderConstraint, 1>{CylinderConstraint::any()}, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(exact_exceedance_distribution(4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(exact_exceedance_distribution(0, 1.0), std::invalid_argument);
    // a too-shallow truncation cannot certify the 1e-6 error contract
    CHECK_THROWS_AS(exact_exceedance_distribution(3, 1.0, 8), TruncationTooCoarse);
    // astronomically large thresholds exceed exact-enumeration range
    CHECK_THROWS_AS(exact_exceedance_distribution(3, 1e9), TruncationTooCoarse);
}
