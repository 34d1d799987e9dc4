#include "cfx/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "cfx/digit_law.hpp"
#include "cfx/errors.hpp"

namespace cfx::oracle {

std::pair<Rational, Rational> cylinder_interval(std::span<const std::uint64_t> digits) {
    if (digits.empty()) throw std::invalid_argument("cylinder_interval: need at least one digit");
    // convergent recurrence h_j = a_j h_{j-1} + h_{j-2}, k_j likewise
    Int h_prev(1L), h(0L);  // h_{-1}, h_0
    Int k_prev(0L), k(1L);
    for (std::uint64_t a : digits) {
        if (a == 0) throw std::invalid_argument("cylinder_interval: digits must be >= 1");
        Int ai = Int::from_uint64(a);
        Int h_next = ai * h + h_prev;
        Int k_next = ai * k + k_prev;
        h_prev = std::move(h);
        h = std::move(h_next);
        k_prev = std::move(k);
        k = std::move(k_next);
    }
    Rational conv(h, k);
    Rational mediant(h + h_prev, k + k_prev);
    if (cmp(conv, mediant) < 0) return {std::move(conv), std::move(mediant)};
    return {std::move(mediant), std::move(conv)};
}

double gauss_measure_of_interval(const Rational& a, const Rational& b) {
    return gauss_measure::of_interval(a, b);
}

namespace {

constexpr long double kLn2 = 0.69314718055994530941723212145818L;

// fraction p/q with int64 parts; q > 0, values stay inside [0, 1]
struct Frac {
    std::int64_t p = 0;
    std::int64_t q = 1;
};

// 1/(a + p/q) = q/(a q + p), exact
Frac branch_image(std::uint64_t a, Frac y) {
    return {y.q, static_cast<std::int64_t>(a) * y.q + y.p};
}

// log((c + y2)/(c + y1)) for integer c >= 0, y1 <= y2; exact fractions in,
// one cancellation-free log1p out
long double log_shift_ratio(std::uint64_t c, Frac y1, Frac y2) {
    __int128 num = static_cast<__int128>(y2.p) * y1.q - static_cast<__int128>(y1.p) * y2.q;
    __int128 den = static_cast<__int128>(y2.q) *
                   (static_cast<__int128>(c) * y1.q + y1.p);
    return log1pl(static_cast<long double>(num) / static_cast<long double>(den));
}

long double frac_ld(Frac f) { return static_cast<long double>(f.p) / static_cast<long double>(f.q); }

struct Bracket {
    long double lo = 0.0L;
    long double hi = 0.0L;
    Bracket& operator+=(const Bracket& o) {
        lo += o.lo;
        hi += o.hi;
        return *this;
    }
    friend Bracket operator+(Bracket a, const Bracket& b) { return a += b; }
    friend Bracket operator*(long double s, const Bracket& b) {
        return {s * b.lo, s * b.hi};
    }
};

// set of y-values as exact interval parts plus a bracketed unresolved tail
// region confined to (0, tail_sup]
struct WSet {
    std::vector<std::pair<Frac, Frac>> parts;  // [y1, y2), y1 < y2
    bool has_tail = false;
    long double tail_sup = 0.0L;
    Bracket tail_lambda;  // Lebesgue mass of the tail region
};

struct Alphabet {
    std::uint64_t first = 1;
    std::uint64_t last = 0;   // inclusive; meaningful when bounded
    bool unbounded = false;   // digits > cut go to the tail machinery
    std::uint64_t cut = 0;    // last explicitly enumerated digit when unbounded
};

Alphabet alphabet_of(const CylinderConstraint& c, std::uint64_t truncation) {
    // keeps every convergent and branch coefficient safely inside int64
    if (c.bound > (1ULL << 20))
        throw TruncationTooCoarse("constraint bound too large for exact enumeration");
    switch (c.kind) {
        case CylinderConstraint::Kind::exactly:
            if (c.bound == 0) throw std::invalid_argument("constraint: digit must be >= 1");
            return {c.bound, c.bound, false, 0};
        case CylinderConstraint::Kind::at_most:
            if (c.bound == 0) throw std::invalid_argument("constraint: at_most bound must be >= 1");
            return {1, c.bound, false, 0};
        case CylinderConstraint::Kind::at_least:
            if (c.bound == 0) throw std::invalid_argument("constraint: at_least bound must be >= 1");
            return {c.bound, 0, true, c.bound + truncation};
        case CylinderConstraint::Kind::free_digit:
            return {1, 0, true, 1 + truncation};
    }
    throw std::logic_error("constraint: bad kind");
}

// Lebesgue measure bracket of U_{a > A} branch_a(W), each part contributing
// sum_a (y2-y1)/((a+y1)(a+y2)), bracketed by the telescoping integral
Bracket tail_lambda_of(std::uint64_t A, const WSet& w) {
    Bracket out;
    for (const auto& [y1, y2] : w.parts) {
        out.lo += log_shift_ratio(A + 1, y1, y2);
        out.hi += log_shift_ratio(A, y1, y2);
    }
    if (w.has_tail) {
        // branch derivative on the tail region is at most 1/A^2
        long double da = static_cast<long double>(A);
        out.lo += 0.0L;
        out.hi += w.tail_lambda.hi / (da * da);
    }
    return out;
}

bool is_full(const WSet& w) {
    return !w.has_tail && w.parts.size() == 1 && w.parts[0].first.p == 0 &&
           w.parts[0].second.p == w.parts[0].second.q;
}

WSet compose(const CylinderConstraint& c, const WSet& next, std::uint64_t truncation,
             std::uint64_t& ops) {
    if (is_full(next)) {
        // the constraint set alone is a single exact interval: no digit
        // enumeration and no truncation at all
        WSet out;
        switch (c.kind) {
            case CylinderConstraint::Kind::exactly:
                if (c.bound == 0) throw std::invalid_argument("constraint: digit must be >= 1");
                out.parts.emplace_back(
                    Frac{1, static_cast<std::int64_t>(c.bound) + 1},
                    Frac{1, static_cast<std::int64_t>(c.bound)});
                return out;
            case CylinderConstraint::Kind::at_least:
                if (c.bound == 0) throw std::invalid_argument("constraint: bound must be >= 1");
                out.parts.emplace_back(Frac{0, 1}, Frac{1, static_cast<std::int64_t>(c.bound)});
                return out;
            case CylinderConstraint::Kind::at_most:
                if (c.bound == 0) throw std::invalid_argument("constraint: bound must be >= 1");
                out.parts.emplace_back(Frac{1, static_cast<std::int64_t>(c.bound) + 1},
                                       Frac{1, 1});
                return out;
            case CylinderConstraint::Kind::free_digit:
                return next;
        }
    }
    Alphabet al = alphabet_of(c, truncation);
    WSet out;
    std::uint64_t last = al.unbounded ? al.cut : al.last;
    if (last < al.first) throw std::invalid_argument("constraint: empty digit alphabet");
    std::size_t expect = static_cast<std::size_t>(last - al.first + 1) * (next.parts.size() + 1);
    if (expect > (std::size_t{1} << 21))
        throw TruncationTooCoarse("probability_of: enumeration too large");
    out.parts.reserve(static_cast<std::size_t>(last - al.first + 1) * next.parts.size());
    for (std::uint64_t a = al.first; a <= last; ++a) {
        for (const auto& [y1, y2] : next.parts) {
            // y -> 1/(a+y) reverses orientation
            Frac lo = branch_image(a, y2);
            Frac hi = branch_image(a, y1);
            out.parts.emplace_back(lo, hi);
            ++ops;
        }
        if (next.has_tail) {
            // image of the unresolved region under branch a
            out.has_tail = true;
            long double da = static_cast<long double>(a);
            long double dsup = next.tail_sup;
            out.tail_lambda.lo += next.tail_lambda.lo / ((da + dsup) * (da + dsup));
            out.tail_lambda.hi += next.tail_lambda.hi / (da * da);
            out.tail_sup = std::max(out.tail_sup, 1.0L / da);
        }
    }
    if (al.unbounded) {
        if (next.has_tail)
            throw TruncationTooCoarse("probability_of: nested unresolved tails");
        out.has_tail = true;
        out.tail_sup = std::max(out.tail_sup, 1.0L / static_cast<long double>(al.cut + 1));
        out.tail_lambda += tail_lambda_of(al.cut, next);
        ops += next.parts.size();
    }
    return out;
}

// integral over W of 1/(a+y) - 1/(a+1+y), the Gauss-kernel mass that
// branch a contributes (up to the 1/log2 normalizer)
Bracket branch_mass(std::uint64_t a, const WSet& w, std::uint64_t& ops) {
    Bracket out;
    for (const auto& [y1, y2] : w.parts) {
        long double v = log_shift_ratio(a, y1, y2) - log_shift_ratio(a + 1, y1, y2);
        out.lo += v;
        out.hi += v;
        ++ops;
    }
    if (w.has_tail) {
        long double da = static_cast<long double>(a);
        long double g0 = 1.0L / (da * (da + 1.0L));
        long double gs = 1.0L / ((da + w.tail_sup) * (da + w.tail_sup + 1.0L));
        out.lo += w.tail_lambda.lo * gs;
        out.hi += w.tail_lambda.hi * g0;
    }
    return out;
}

// sum over all a > A of branch_mass(a, W): telescopes to
// integral over W of 1/(A+1+y)
Bracket telescoped_tail_mass(std::uint64_t A, const WSet& w, std::uint64_t& ops) {
    Bracket out;
    for (const auto& [y1, y2] : w.parts) {
        long double v = log_shift_ratio(A + 1, y1, y2);
        out.lo += v;
        out.hi += v;
        ++ops;
    }
    if (w.has_tail) {
        long double da = static_cast<long double>(A) + 1.0L;
        out.lo += w.tail_lambda.lo / (da + w.tail_sup);
        out.hi += w.tail_lambda.hi / da;
    }
    return out;
}

}  // namespace

ProbBracket probability_of(std::span<const CylinderConstraint> constraints,
                           std::uint64_t tail_truncation) {
    if (constraints.empty() || constraints.size() > 3)
        throw std::invalid_argument("probability_of: supports 1..3 positions");
    if (tail_truncation < 8)
        throw std::invalid_argument("probability_of: truncation too small");

    std::uint64_t ops = 0;
    WSet w;
    w.parts.emplace_back(Frac{0, 1}, Frac{1, 1});
    for (std::size_t j = constraints.size(); j >= 2; --j)
        w = compose(constraints[j - 1], w, tail_truncation, ops);

    Alphabet first = alphabet_of(constraints[0], tail_truncation);
    // the tail over first-position digits telescopes exactly (the sum over
    // a > A of the branch masses is the integral of 1/(A+1+y) over W), so
    // an unbounded first alphabet needs only a short explicit head
    std::uint64_t last = first.unbounded ? first.first + 63 : first.last;
    Bracket mass;
    for (std::uint64_t a = first.first; a <= last; ++a) mass += branch_mass(a, w, ops);
    if (first.unbounded) mass += telescoped_tail_mass(last, w, ops);
    long double lo = mass.lo / kLn2;
    long double hi = mass.hi / kLn2;
    long double slush = 1e-17L * static_cast<long double>(ops + 16);
    ProbBracket out;
    out.lo = static_cast<double>(std::max(0.0L, lo - slush));
    out.hi = static_cast<double>(std::min(1.0L, hi + slush));
    return out;
}

ExactLaw exact_exceedance_distribution(std::uint64_t n, double u,
                                       std::uint64_t tail_truncation) {
    if (n < 1 || n > 3)
        throw std::invalid_argument("exact_exceedance_distribution: n must be in {1,2,3}");
    ExactLaw law;
    law.n = n;
    law.threshold_m = scaled_threshold(n, u);
    law.probabilities.assign(n + 1, 0.0);

    if (law.threshold_m == 1) {
        law.probabilities[n] = 1.0;  // every digit is >= 1
        law.error_bound = 0.0;
        return law;
    }

    const std::uint64_t m = law.threshold_m;
    double max_half = 0.0;
    for (std::uint64_t k = 0; k <= n; ++k) {
        // sum probability over all digit patterns with exactly k positions
        // exceeding (>= m) and the rest below (<= m-1)
        ProbBracket total{0.0, 0.0};
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<std::uint64_t>(__builtin_popcount(mask)) != k) continue;
            std::vector<CylinderConstraint> cs;
            for (std::uint64_t pos = 0; pos < n; ++pos) {
                if (mask & (1u << pos))
                    cs.push_back(CylinderConstraint::at_least(m));
                else
                    cs.push_back(CylinderConstraint::at_most(m - 1));
            }
            ProbBracket p = probability_of(cs, tail_truncation);
            total.lo += p.lo;
            total.hi += p.hi;
        }
        law.probabilities[k] = total.mid();
        max_half = std::max(max_half, total.half_width());
    }
    law.error_bound = max_half;
    if (law.error_bound > 1e-6)
        throw TruncationTooCoarse("exact_exceedance_distribution: error bound above 1e-6");
    return law;
}

}  // namespace cfx::oracle
