#pragma once

#include <gmp.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cfx/bigint.hpp"
#include "cfx/errors.hpp"
#include "cfx/pow2.hpp"
#include "cfx/rational.hpp"
#include "cfx/rng.hpp"

namespace cfx {

/// How a DigitStream grows its random-bit budget when the current enclosure
/// straddles a digit boundary.
struct RefinementPolicy {
    std::uint64_t initial_bits = 128;
    std::uint64_t growth_factor = 2;
    std::uint64_t max_bits = 65536;

    /// Policy sized for extracting about `n` digits without refinement:
    /// digit extraction consumes ~3.42 random bits per digit on average
    /// (Levy/Lochs), so the initial budget is 3.45*n plus slack, rounded to
    /// whole 64-bit words.
    static RefinementPolicy for_digit_count(std::uint64_t n);

    void validate() const;
};

/// How the sample point is represented.
///
/// Both modes produce exact rational enclosures of a point distributed by
/// the Gauss measure, and both resolve to the same digit-extraction
/// machinery:
///  - rejection: draw (x, V) as lazy dyadic uniforms and accept when
///    V*(1+x) < 1, an exact integer comparison. Acceptance reweights the
///    uniform x by 1/(1+x), which is the Gauss density. No transcendental
///    arithmetic anywhere; this is the fast default.
///  - inverse_cdf: x = 2^U - 1 with U a lazy dyadic uniform, enclosed by
///    directed-rounding evaluation of 2^U.
enum class SamplerKind { rejection, inverse_cdf };

/// Draws U from `bits` uniform random bits and returns an exact rational
/// enclosure of x = 2^U - 1, the inverse-CDF image of U under the Gauss
/// measure cdf log2(1+x). Deterministic given (seed, trial). The
/// probability-zero edge where U's bits are all zeros or all ones is
/// resolved by drawing further bits.
RealInterval gauss_sample(std::uint64_t seed, std::uint64_t trial, std::uint64_t bits);

/// Test hook: the enclosure of 2^(X/2^bits) - 1 for an explicit dyadic
/// argument cell, exactly as gauss_sample builds it from random bits.
RealInterval enclose_pow2_minus_one(const Int& x_bits, std::uint64_t bits);

/// Lazily produced continued fraction digits A_1, A_2, ... of one Gauss
/// sample, extracted without any floating-point arithmetic.
///
/// The enclosure state is kept as two exact rational endpoint chains; a
/// digit is emitted only when floor(1/x) is provably constant on the whole
/// enclosure, and the state is then replaced by its exact image under
/// x -> 1/x - digit. When the endpoints disagree the stream draws more
/// random bits per its RefinementPolicy, rebuilds the base enclosure at the
/// larger precision and replays the digits already emitted (they are
/// certified and never change).
class DigitStream {
  public:
    /// Stream over the sample keyed by (seed, trial).
    DigitStream(std::uint64_t seed, std::uint64_t trial, RefinementPolicy policy = {},
                SamplerKind kind = SamplerKind::rejection);

    /// Stream over a fixed enclosure with no random bit source; refinement
    /// requests throw RefinementExhausted. Intended for tests and for
    /// replaying digits of exactly known points.
    explicit DigitStream(const RealInterval& interval);

    ~DigitStream();
    DigitStream(const DigitStream&) = delete;
    DigitStream& operator=(const DigitStream&) = delete;

    /// Next digit A_{k+1}. Values >= 2^64 are reported saturated as
    /// 2^64 - 1 (their exact value still drives the state update). Throws
    /// RefinementExhausted when the bit budget cap is reached with a digit
    /// boundary unresolved, or when a fixed rational enclosure ends.
    std::uint64_t next_digit();

    std::uint64_t digits_emitted() const { return static_cast<std::uint64_t>(digits_.size()); }
    /// Total random bits consumed, including rejected attempts.
    std::uint64_t bits_used() const { return bits_drawn_; }
    /// Bits of precision backing the current enclosure.
    std::uint64_t precision_bits() const { return x_bits_; }
    std::uint64_t refinements() const { return refinements_; }

    /// Current enclosure of the remainder T^k(x) as exact rationals.
    RealInterval state() const;

    /// Spend one refinement step now (more bits, strictly tighter state).
    /// Useful for prefetching precision and for testing the refinement
    /// contract; emitted digits are unaffected.
    void refine_now() { refine(); }

  private:
    Int take_bits(unsigned long k);
    void accept_sample();
    void grow_precision(std::uint64_t target_bits);
    void rebuild_from_base();
    void replay_digits();
    void refine();

    // endpoint chains: lo = nlo/dlo, hi = nhi/dhi (not necessarily reduced)
    mpz_t nlo_, dlo_, nhi_, dhi_;
    mpz_t q_, r_, t_;  // scratch

    std::vector<std::uint64_t> digits_;  // emitted digits (saturated)
    std::vector<std::pair<std::size_t, Int>> big_digits_;  // exact oversized values

    std::optional<TrialBitSource> src_;
    std::uint64_t word_buf_ = 0;
    unsigned buf_avail_ = 0;
    std::uint64_t bits_drawn_ = 0;

    SamplerKind kind_ = SamplerKind::rejection;
    RefinementPolicy policy_;
    Int x_arg_;                    // rejection: x in [X, X+1)/2^x_bits_
    std::optional<Pow2Chain> chain_;  // inverse_cdf mode
    std::uint64_t x_bits_ = 0;

    // last committed base enclosure, for intersecting refinements
    Int base_lo_num_, base_hi_num_;
    unsigned long base_lo_bits_ = 0, base_hi_bits_ = 0;
    bool have_base_ = false;

    std::uint64_t refinements_ = 0;
};

/// Continued fraction digits of p/q in (0,1) by the Euclidean algorithm,
/// canonical form (last digit >= 2), truncated at max_count.
std::vector<std::uint64_t> digits_of_rational(std::uint64_t p, std::uint64_t q,
                                              std::size_t max_count);
std::vector<std::uint64_t> digits_of_rational(const Rational& x, std::size_t max_count);

}  // namespace cfx
