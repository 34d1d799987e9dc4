#include "doctest.h"

#include <mpfr.h>

#include "cfx/bigint.hpp"
#include "cfx/digit_stream.hpp"
#include "cfx/pow2.hpp"
#include "cfx/rng.hpp"

using namespace cfx;

namespace {

// exact check that (x+1)^2 and 2 are on the expected sides, i.e. the
// enclosure of 2^(1/2) - 1 really contains sqrt(2) - 1
bool encloses_sqrt2_minus_1(const RealInterval& iv) {
    Rational lo1 = iv.lo + Rational(1L);
    Rational hi1 = iv.hi + Rational(1L);
    return cmp(lo1 * lo1, Rational(2L)) <= 0 && cmp(hi1 * hi1, Rational(2L)) >= 0;
}

// independent high-precision point enclosure of 2^(j/2^b) - 1 via mpfr_exp2
void mpfr_reference(const Int& j, unsigned long b, unsigned long prec, Rational& lo,
                    Rational& hi) {
    mpfr_t u, y;
    mpfr_init2(u, b + 2);
    mpfr_init2(y, prec);
    mpfr_set_z_2exp(u, j.raw(), -static_cast<long>(b), MPFR_RNDN);
    mpfr_exp2(y, u, MPFR_RNDD);
    Int z;
    long e = mpfr_get_z_2exp(z.raw(), y);
    lo = Rational::dyadic(z - Int::pow2(static_cast<unsigned long>(-e)),
                          static_cast<unsigned long>(-e));
    mpfr_exp2(y, u, MPFR_RNDU);
    e = mpfr_get_z_2exp(z.raw(), y);
    hi = Rational::dyadic(z - Int::pow2(static_cast<unsigned long>(-e)),
                          static_cast<unsigned long>(-e));
    mpfr_clear(u);
    mpfr_clear(y);
}

}  // namespace

TEST_CASE("enclosure of 2^(1/2) - 1 contains sqrt(2) - 1") {
    // U = 1/2 forced: argument 1 with 1 bit
    RealInterval iv = enclose_pow2_minus_one(Int(1L), 1);
    CHECK(encloses_sqrt2_minus_1(iv));
    // 0.41421356...
    CHECK(iv.lo.to_double() == doctest::Approx(0.41421356).epsilon(1e-6));
}

TEST_CASE("staged enclosure agrees with direct mpfr evaluation") {
    std::uint64_t sm = 99;
    for (int rep = 0; rep < 12; ++rep) {
        unsigned long b = 1500 + static_cast<unsigned long>(splitmix64_next(sm) % 3000);
        Int j;
        for (unsigned long left = b; left > 0;) {
            unsigned long k = left >= 64 ? 64 : left;
            j <<= k;
            j += Int::from_uint64(splitmix64_next(sm) >> (64 - k));
            left -= k;
        }
        if (j.is_zero()) j = Int(1L);
        RealInterval mine = enclose_pow2_minus_one(j, b);
        Rational ref_lo, ref_hi;
        // the reference at higher precision must sit inside our enclosure
        mpfr_reference(j, b, b + 128, ref_lo, ref_hi);
        CHECK(cmp(mine.lo, ref_lo) <= 0);
        CHECK(cmp(mine.hi, ref_hi) >= 0);
        // and our enclosure is not much wider than the dyadic cell demands
        Rational width = mine.width();
        Rational cell_bound = Rational(Int(2L), Int(1L)) *
                              Rational(Int(1L), Int::pow2(b)) * Rational(Int(1L), Int(1L));
        CHECK(cmp(width, cell_bound) <= 0);  // width <= 2*log2*2^(1-b) loosened to 2^(1-b)
    }
}

TEST_CASE("gauss_sample basic contract") {
    RealInterval iv = gauss_sample(7, 0, 64);
    CHECK(iv.lo.sgn() > 0);
    CHECK(cmp(iv.hi, Rational(1L)) < 0);
    CHECK(iv.bit_budget_used >= 64);

    // determinism: bit-identical enclosures
    RealInterval iv2 = gauss_sample(7, 0, 64);
    CHECK(iv.lo == iv2.lo);
    CHECK(iv.hi == iv2.hi);
    CHECK(iv.bit_budget_used == iv2.bit_budget_used);

    // different trials differ
    RealInterval iv3 = gauss_sample(7, 1, 64);
    CHECK(iv.lo != iv3.lo);
}

TEST_CASE("gauss_sample width bound") {
    for (std::uint64_t bits : {8ULL, 64ULL, 256ULL}) {
        for (std::uint64_t trial = 0; trial < 4; ++trial) {
            RealInterval iv = gauss_sample(11, trial, bits);
            // width <= 2 * ln2 * 2^(1-bits) per contract; check <= 2^(2-bits)
            Rational bound(Int(4L), Int::pow2(static_cast<unsigned long>(bits)));
            CHECK(cmp(iv.width(), bound) <= 0);
        }
    }
}

TEST_CASE("gauss_sample distribution midpoint sanity") {
    // median of the Gauss measure is 2^(1/2) - 1 = 0.4142...; check the
    // empirical median over a few hundred samples lands nearby
    int below = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        RealInterval iv = gauss_sample(5, static_cast<std::uint64_t>(t), 64);
        if (iv.hi.to_double() < 0.41421356237309515) ++below;
    }
    // binomial(400, 1/2): 4 sigma is 40
    CHECK(below > 200 - 40);
    CHECK(below < 200 + 40);
}

TEST_CASE("point enclosure near the top of the unit interval stays inside") {
    // U = (2^b - 1)/2^b: x is close to 1 but the enclosure must not touch it
    unsigned long b = 48;
    Int top = Int::pow2(b) - Int(1L);
    RealInterval iv = enclose_pow2_minus_one(top, b);
    CHECK(cmp(iv.hi, Rational(1L)) < 0);
    CHECK(iv.lo.to_double() > 0.999999);
}

TEST_CASE("pow2 chain rejects out-of-range extensions") {
    Pow2Chain c;
    CHECK_THROWS_AS(c.append_bits(Int(4L), 2), std::invalid_argument);
    CHECK_THROWS_AS(c.x_enclosure(), std::logic_error);
}

TEST_CASE("pow2 chain appends nest the enclosure") {
    Pow2Chain c;
    c.append_bits(Int(5L), 3);  // U in [5/8, 6/8)
    DyadicEnclosure e1 = c.x_enclosure();
    Rational lo1 = Rational::dyadic(e1.lo_num, e1.lo_bits);
    Rational hi1 = Rational::dyadic(e1.hi_num, e1.hi_bits);
    c.append_bits(Int(2L), 2);  // U in [22/32, 23/32)
    DyadicEnclosure e2 = c.x_enclosure();
    Rational lo2 = Rational::dyadic(e2.lo_num, e2.lo_bits);
    Rational hi2 = Rational::dyadic(e2.hi_num, e2.hi_bits);
    CHECK(cmp(lo1, lo2) <= 0);
    CHECK(cmp(hi2, hi1) <= 0);
    CHECK(cmp(lo2, hi2) < 0);
}
