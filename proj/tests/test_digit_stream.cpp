#include "doctest.h"

#include "cfx/digit_stream.hpp"
#include "cfx/rng.hpp"

#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>
#include <cmath>

using namespace cfx;

TEST_CASE("digits_of_rational worked examples") {
    CHECK(digits_of_rational(9, 20, 10) == std::vector<std::uint64_t>{2, 4, 2});
    CHECK(digits_of_rational(1, 2, 10) == std::vector<std::uint64_t>{2});
    CHECK(digits_of_rational(2, 3, 10) == std::vector<std::uint64_t>{1, 2});
    CHECK(digits_of_rational(355, 1000, 10) == std::vector<std::uint64_t>{2, 1, 4, 2, 6});
    CHECK(digits_of_rational(9, 20, 2) == std::vector<std::uint64_t>{2, 4});  // truncation
    CHECK_THROWS_AS(digits_of_rational(3, 2, 10), std::invalid_argument);
    CHECK_THROWS_AS(digits_of_rational(0, 2, 10), std::invalid_argument);
}

TEST_CASE("digits_of_rational reconstructs the fraction exactly") {
    // independent oracle: rebuild p/q from its digit list via the convergent
    // recurrence and require exact equality
    std::uint64_t sm = 2718;
    for (int rep = 0; rep < 300; ++rep) {
        std::uint64_t q = 2 + splitmix64_next(sm) % 100000;
        std::uint64_t p = 1 + splitmix64_next(sm) % (q - 1);
        auto ds = digits_of_rational(p, q, 128);
        Rational value(0L);
        for (auto it = ds.rbegin(); it != ds.rend(); ++it) {
            value = (Rational(static_cast<long>(*it)) + value).reciprocal();
        }
        CHECK(value == Rational(static_cast<long>(p), static_cast<long>(q)));
        CHECK(ds.back() >= 2);  // canonical form
        for (auto d : ds) CHECK(d >= 1);
    }
}

TEST_CASE("next_digit on an interval tightly around 9/20") {
    RealInterval iv(Rational(9L, 20L) - Rational(1L, 1000000L),
                    Rational(9L, 20L) + Rational(1L, 1000000L));
    DigitStream s(iv);
    CHECK(s.next_digit() == 2);
    // state should now be near 2/9 = 1/(9/20) - 2
    RealInterval st = s.state();
    CHECK(st.contains(Rational(2L, 9L)));
    CHECK(s.next_digit() == 4);
    // 9/20 = [2,4,2] ends here; the endpoint expansions diverge at the
    // third digit ([...,2,2499,...] vs [...,1,...]) so the fixed interval
    // cannot certify it
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 10; ++i) s.next_digit();
        }(),
        RefinementExhausted);
}

TEST_CASE("next_digit on degenerate rational interval matches digits_of_rational") {
    for (auto [p, q] : std::vector<std::pair<long, long>>{{9, 20}, {355, 1000}, {1, 2},
                                                          {617, 1234}, {89, 144}}) {
        RealInterval pt(Rational(p, q), Rational(p, q));
        DigitStream s(pt);
        auto expected = digits_of_rational(Rational(p, q), 100);
        for (auto d : expected) CHECK(s.next_digit() == d);
        CHECK_THROWS_AS(s.next_digit(), RefinementExhausted);  // expansion ended
    }
}

TEST_CASE("next_digit around sqrt(2)-1 yields the periodic digit 2") {
    // consecutive continued fraction convergents of sqrt(2)-1 bracket it:
    // 408/985 < sqrt(2)-1 < 985/2378
    RealInterval iv(Rational(408L, 985L), Rational(985L, 2378L));
    DigitStream s(iv);
    for (int i = 0; i < 8; ++i) CHECK(s.next_digit() == 2);
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 20; ++i) s.next_digit();
        }(),
        RefinementExhausted);
}

TEST_CASE("straddling interval around 1/3 requests refinement") {
    RealInterval iv(Rational(1L, 3L) - Rational(1L, 1000000000L),
                    Rational(1L, 3L) + Rational(1L, 1000000000L));
    DigitStream s(iv);
    // floor(1/x) is 2 on one side and 3 on the other: needs refinement,
    // and a fixed interval cannot refine
    CHECK_THROWS_AS(s.next_digit(), RefinementExhausted);
}

TEST_CASE("sampled streams are deterministic and sampler kinds stay exact") {
    for (SamplerKind kind : {SamplerKind::rejection, SamplerKind::inverse_cdf}) {
        RefinementPolicy pol;
        pol.initial_bits = 256;
        pol.max_bits = 4096;
        DigitStream a(42, 7, pol, kind);
        DigitStream b(42, 7, pol, kind);
        for (int i = 0; i < 40; ++i) CHECK(a.next_digit() == b.next_digit());
        CHECK(a.bits_used() == b.bits_used());
    }
}

TEST_CASE("stream digits agree before and after refinement (replay consistency)") {
    RefinementPolicy small;
    small.initial_bits = 128;
    small.max_bits = 65536;
    RefinementPolicy big;
    big.initial_bits = 2048;
    big.max_bits = 65536;
    for (std::uint64_t trial = 0; trial < 8; ++trial) {
        DigitStream s_small(9, trial, small);
        DigitStream s_big(9, trial, big);
        // the small stream refines several times on the way to 200 digits;
        // digits must match the wide-budget stream exactly
        for (int i = 0; i < 200; ++i) {
            auto d1 = s_small.next_digit();
            auto d2 = s_big.next_digit();
            CHECK(d1 == d2);
            if (d1 != d2) return;
        }
        CHECK(s_small.refinements() > 0);
    }
}

TEST_CASE("enclosure state shrinks under refinement and keeps emitted digits") {
    RefinementPolicy pol;
    pol.initial_bits = 128;
    pol.max_bits = 8192;
    DigitStream s(3, 1, pol);
    std::vector<std::uint64_t> seen;
    for (int i = 0; i < 60; ++i) seen.push_back(s.next_digit());
    CHECK(s.refinements() > 0);
    CHECK(s.digits_emitted() == 60);
    // all digits positive
    for (auto d : seen) CHECK(d >= 1);
}

TEST_CASE("refinement exhaustion is reported, not mangled") {
    RefinementPolicy tight;
    tight.initial_bits = 64;
    tight.max_bits = 128;  // absurdly small: will run out quickly
    DigitStream s(1, 0, tight);
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 100; ++i) s.next_digit();
        }(),
        RefinementExhausted);
}

TEST_CASE("refinement strictly shrinks the enclosure and keeps digits") {
    for (SamplerKind kind : {SamplerKind::rejection, SamplerKind::inverse_cdf}) {
        RefinementPolicy pol;
        pol.initial_bits = 256;
        pol.max_bits = 1 << 16;
        DigitStream s(13, 2, pol, kind);
        DigitStream twin(13, 2, pol, kind);
        for (int i = 0; i < 10; ++i) s.next_digit(), twin.next_digit();
        Rational w_before = s.state().width();
        std::uint64_t bits_before = s.precision_bits();
        s.refine_now();
        CHECK(s.precision_bits() > bits_before);
        CHECK(cmp(s.state().width(), w_before) < 0);  // strictly tighter
        CHECK(s.digits_emitted() == 10);
        // the refined stream continues exactly like its unrefined twin
        for (int i = 0; i < 30; ++i) CHECK(s.next_digit() == twin.next_digit());
    }
}

TEST_CASE("rejection and inverse-cdf samplers draw from the same law") {
    // empirical first-digit frequency of each sampler, compared to each
    // other within Monte Carlo tolerance
    const int trials = 3000;
    int ones_rej = 0, ones_inv = 0;
    RefinementPolicy pol;
    pol.initial_bits = 128;
    for (int t = 0; t < trials; ++t) {
        DigitStream r(77, static_cast<std::uint64_t>(t), pol, SamplerKind::rejection);
        DigitStream i(77, static_cast<std::uint64_t>(t), pol, SamplerKind::inverse_cdf);
        ones_rej += (r.next_digit() == 1);
        ones_inv += (i.next_digit() == 1);
    }
    // both should be near 0.415 * 3000 = 1245, sd ~ 27; allow 5 sigma each
    CHECK(std::abs(ones_rej - 1245) < 135);
    CHECK(std::abs(ones_inv - 1245) < 135);
}
