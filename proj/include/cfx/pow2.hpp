#pragma once

#include <mpfr.h>

#include <cstdint>

#include "cfx/bigint.hpp"
#include "cfx/rational.hpp"

namespace cfx {

/// Dyadic enclosure of x = 2^U - 1 for U in the cell [X, X+1)/2^bits:
/// lo_num/2^lo_bits <= x <= hi_num/2^hi_bits, both bounds exact dyadics.
struct DyadicEnclosure {
    Int lo_num;
    unsigned long lo_bits;
    Int hi_num;
    unsigned long hi_bits;
};

/// Certified enclosure of 2^U for a lazily extended dyadic argument
/// U = X/2^bits, built with MPFR directed rounding. Appending bits shrinks
/// the represented cell [X/2^bits, (X+1)/2^bits]; the enclosure is
/// recomputed at the matching precision, so bounds at any stage are
/// certified and nested (the appended cell is a subset of the previous one,
/// and callers intersect against their committed base when replaying).
class Pow2Chain {
  public:
    Pow2Chain();
    ~Pow2Chain();
    Pow2Chain(const Pow2Chain&) = delete;
    Pow2Chain& operator=(const Pow2Chain&) = delete;
    Pow2Chain(Pow2Chain&& o) noexcept;
    Pow2Chain& operator=(Pow2Chain&& o) noexcept;

    /// Append dbits argument bits with value delta: X <- X*2^dbits + delta.
    void append_bits(const Int& delta, unsigned long dbits);

    unsigned long bits() const { return bits_; }
    /// X == 0: x's lower bound is exactly 0.
    bool lower_is_one() const { return x_arg_.is_zero(); }
    /// X == 2^bits - 1: x's upper bound touches 1.
    bool upper_at_top() const;

    /// Enclosure of x = 2^U - 1 over the whole remaining cell:
    /// [2^(X/2^b) - 1, 2^((X+1)/2^b) - 1] widened outward by rounding.
    DyadicEnclosure x_enclosure() const;

    /// Enclosure of the exact point 2^(X/2^bits) - 1 (rounding width only).
    DyadicEnclosure x_point_enclosure() const;

  private:
    void recompute();

    Int x_arg_;
    unsigned long bits_ = 0;
    mpfr_t ylo_;  // <= 2^(X/2^bits), rounded down
    mpfr_t yhi_;  // >= 2^((X+1)/2^bits), rounded up
};

/// Precision guard added on top of the argument length.
inline constexpr unsigned long kPow2GuardBits = 32;

}  // namespace cfx
