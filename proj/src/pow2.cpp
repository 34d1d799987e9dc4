#include "cfx/pow2.hpp"

#include <stdexcept>

namespace cfx {

Pow2Chain::Pow2Chain() {
    mpfr_init2(ylo_, 8);
    mpfr_init2(yhi_, 8);
    mpfr_set_ui(ylo_, 1, MPFR_RNDD);
    mpfr_set_ui(yhi_, 2, MPFR_RNDU);  // U in [0,1] => y in [1,2]
}

Pow2Chain::~Pow2Chain() {
    mpfr_clear(ylo_);
    mpfr_clear(yhi_);
}

Pow2Chain::Pow2Chain(Pow2Chain&& o) noexcept {
    mpfr_init2(ylo_, 8);
    mpfr_init2(yhi_, 8);
    mpfr_swap(ylo_, o.ylo_);
    mpfr_swap(yhi_, o.yhi_);
    x_arg_ = std::move(o.x_arg_);
    bits_ = o.bits_;
}

Pow2Chain& Pow2Chain::operator=(Pow2Chain&& o) noexcept {
    mpfr_swap(ylo_, o.ylo_);
    mpfr_swap(yhi_, o.yhi_);
    x_arg_ = std::move(o.x_arg_);
    std::swap(bits_, o.bits_);
    return *this;
}

bool Pow2Chain::upper_at_top() const {
    if (bits_ == 0) return true;
    Int top = x_arg_ + Int(1L);
    return top.bit_length() == bits_ + 1 && top.lowest_set_bit() == bits_;
}

void Pow2Chain::append_bits(const Int& delta, unsigned long dbits) {
    if (dbits == 0) return;
    if (delta.sgn() < 0 || delta.bit_length() > dbits)
        throw std::invalid_argument("Pow2Chain::append_bits: delta out of range");
    x_arg_ <<= dbits;
    x_arg_ += delta;
    bits_ += dbits;
    recompute();
}

void Pow2Chain::recompute() {
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits_ + kPow2GuardBits);
    mpfr_t u;
    mpfr_init2(u, static_cast<mpfr_prec_t>(bits_) + 2);
    mpfr_set_prec(ylo_, prec);
    mpfr_set_prec(yhi_, prec);

    mpfr_set_z_2exp(u, x_arg_.raw(), -static_cast<long>(bits_), MPFR_RNDN);  // exact
    mpfr_exp2(ylo_, u, MPFR_RNDD);

    Int top = x_arg_ + Int(1L);
    mpfr_set_z_2exp(u, top.raw(), -static_cast<long>(bits_), MPFR_RNDN);  // exact
    mpfr_exp2(yhi_, u, MPFR_RNDU);
    mpfr_clear(u);
}

namespace {

void to_dyadic(mpfr_srcptr v, Int& num, unsigned long& bits_out) {
    Int z;
    long e = static_cast<long>(mpfr_get_z_2exp(z.raw(), v));
    // value = z * 2^e; x = value - 1, exact in integers
    if (e >= 0) {
        num = (z << static_cast<unsigned long>(e)) - Int(1L);
        bits_out = 0;
    } else {
        num = z - Int::pow2(static_cast<unsigned long>(-e));
        bits_out = static_cast<unsigned long>(-e);
    }
}

}  // namespace

DyadicEnclosure Pow2Chain::x_enclosure() const {
    if (bits_ == 0) throw std::logic_error("Pow2Chain: no bits appended yet");
    DyadicEnclosure out;
    to_dyadic(ylo_, out.lo_num, out.lo_bits);
    to_dyadic(yhi_, out.hi_num, out.hi_bits);
    return out;
}

DyadicEnclosure Pow2Chain::x_point_enclosure() const {
    if (bits_ == 0) throw std::logic_error("Pow2Chain: no bits appended yet");
    DyadicEnclosure out;
    to_dyadic(ylo_, out.lo_num, out.lo_bits);
    mpfr_t u, y;
    mpfr_init2(u, static_cast<mpfr_prec_t>(bits_) + 2);
    mpfr_init2(y, mpfr_get_prec(ylo_));
    mpfr_set_z_2exp(u, x_arg_.raw(), -static_cast<long>(bits_), MPFR_RNDN);  // exact
    mpfr_exp2(y, u, MPFR_RNDU);
    to_dyadic(y, out.hi_num, out.hi_bits);
    mpfr_clear(u);
    mpfr_clear(y);
    return out;
}

}  // namespace cfx
