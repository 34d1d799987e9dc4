#include "cfx/digit_stream.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace cfx {

namespace {

std::uint64_t round_up_words(std::uint64_t bits) { return (bits + 63) / 64 * 64; }

// max(a/2^abits, b/2^bbits) -> selects into (a, abits)
void dyadic_max(Int& a, unsigned long& abits, const Int& b, unsigned long bbits) {
    Int lhs = a, rhs = b;
    if (abits < bbits)
        lhs <<= (bbits - abits);
    else if (bbits < abits)
        rhs <<= (abits - bbits);
    if (lhs < rhs) {
        a = b;
        abits = bbits;
    }
}

void dyadic_min(Int& a, unsigned long& abits, const Int& b, unsigned long bbits) {
    Int lhs = a, rhs = b;
    if (abits < bbits)
        lhs <<= (bbits - abits);
    else if (bbits < abits)
        rhs <<= (abits - bbits);
    if (lhs > rhs) {
        a = b;
        abits = bbits;
    }
}

}  // namespace

void RefinementPolicy::validate() const {
    if (initial_bits < 2) throw std::invalid_argument("RefinementPolicy: initial_bits must be >= 2");
    if (growth_factor < 2) throw std::invalid_argument("RefinementPolicy: growth_factor must be >= 2");
    if (max_bits < initial_bits)
        throw std::invalid_argument("RefinementPolicy: max_bits must be >= initial_bits");
}

RefinementPolicy RefinementPolicy::for_digit_count(std::uint64_t n) {
    RefinementPolicy p;
    std::uint64_t want = static_cast<std::uint64_t>(3.45 * static_cast<double>(n)) + 256;
    p.initial_bits = round_up_words(std::max<std::uint64_t>(want, 128));
    p.growth_factor = 2;
    p.max_bits = std::max<std::uint64_t>(65536, p.initial_bits * 4);
    return p;
}

RealInterval enclose_pow2_minus_one(const Int& x_bits, std::uint64_t bits) {
    if (bits == 0) throw std::invalid_argument("enclose_pow2_minus_one: bits must be positive");
    if (x_bits.sgn() < 0 || x_bits.bit_length() > bits)
        throw std::invalid_argument("enclose_pow2_minus_one: argument out of range");
    Pow2Chain chain;
    chain.append_bits(x_bits, static_cast<unsigned long>(bits));
    DyadicEnclosure enc = chain.x_point_enclosure();
    return RealInterval(Rational::dyadic(std::move(enc.lo_num), enc.lo_bits),
                        Rational::dyadic(std::move(enc.hi_num), enc.hi_bits), chain.bits());
}

RealInterval gauss_sample(std::uint64_t seed, std::uint64_t trial, std::uint64_t bits) {
    if (bits < 2) throw std::invalid_argument("gauss_sample: bits must be >= 2");
    TrialBitSource src(seed, trial);
    std::uint64_t buf = 0;
    unsigned avail = 0;
    auto take = [&](unsigned long k) {
        Int out;
        while (k > 0) {
            if (avail == 0) {
                buf = src.next_word();
                avail = 64;
            }
            unsigned grab = static_cast<unsigned>(std::min<unsigned long>(k, avail));
            std::uint64_t piece =
                (buf >> (avail - grab)) & (grab == 64 ? ~0ULL : ((1ULL << grab) - 1));
            out <<= grab;
            out += Int::from_uint64(piece);
            avail -= grab;
            k -= grab;
        }
        return out;
    };
    Pow2Chain chain;
    chain.append_bits(take(static_cast<unsigned long>(bits)), static_cast<unsigned long>(bits));
    // U == 0 or U == 1 - 2^-bits puts an endpoint on the domain boundary;
    // resolve with fresh bits (probability 2^(1-bits))
    while (chain.lower_is_one() || chain.upper_at_top()) {
        if (chain.bits() > bits + 1024)
            throw std::runtime_error("gauss_sample: degenerate bit stream");
        chain.append_bits(take(64), 64);
    }
    DyadicEnclosure enc = chain.x_enclosure();
    return RealInterval(Rational::dyadic(std::move(enc.lo_num), enc.lo_bits),
                        Rational::dyadic(std::move(enc.hi_num), enc.hi_bits), chain.bits());
}

DigitStream::DigitStream(std::uint64_t seed, std::uint64_t trial, RefinementPolicy policy,
                         SamplerKind kind)
    : src_(TrialBitSource(seed, trial)), kind_(kind), policy_(policy) {
    policy_.validate();
    mpz_inits(nlo_, dlo_, nhi_, dhi_, q_, r_, t_, (mpz_ptr) nullptr);
    if (kind_ == SamplerKind::rejection) {
        accept_sample();
        if (x_bits_ < policy_.initial_bits) grow_precision(policy_.initial_bits);
    } else {
        chain_.emplace();
        grow_precision(policy_.initial_bits);
    }
    rebuild_from_base();
}

DigitStream::DigitStream(const RealInterval& interval) {
    mpz_inits(nlo_, dlo_, nhi_, dhi_, q_, r_, t_, (mpz_ptr) nullptr);
    mpz_set(nlo_, interval.lo.num().raw());
    mpz_set(dlo_, interval.lo.den().raw());
    mpz_set(nhi_, interval.hi.num().raw());
    mpz_set(dhi_, interval.hi.den().raw());
    x_bits_ = interval.bit_budget_used;
    bits_drawn_ = interval.bit_budget_used;
}

DigitStream::~DigitStream() { mpz_clears(nlo_, dlo_, nhi_, dhi_, q_, r_, t_, (mpz_ptr) nullptr); }

Int DigitStream::take_bits(unsigned long k) {
    Int out;
    bits_drawn_ += k;
    while (k > 0) {
        if (buf_avail_ == 0) {
            word_buf_ = src_->next_word();
            buf_avail_ = 64;
        }
        unsigned grab = static_cast<unsigned>(std::min<unsigned long>(k, buf_avail_));
        std::uint64_t piece =
            (word_buf_ >> (buf_avail_ - grab)) & (grab == 64 ? ~0ULL : ((1ULL << grab) - 1));
        out <<= grab;
        out += Int::from_uint64(piece);
        buf_avail_ -= grab;
        k -= grab;
    }
    return out;
}

void DigitStream::accept_sample() {
    // Rejection against the Lebesgue envelope: (x, V) uniform on (0,1)^2,
    // accept iff V*(1+x) < 1. Decided on enclosures with exact integer
    // arithmetic; ties (probability ~2^-bits) draw more bits.
    for (int attempt = 0; attempt < 4096; ++attempt) {
        Int xp = take_bits(64);
        std::uint64_t xb = 64;
        Int v = take_bits(64);
        std::uint64_t vb = 64;
        for (;;) {
            Int one = Int::pow2(static_cast<unsigned long>(vb + xb));
            Int sup = (v + Int(1L)) * (Int::pow2(static_cast<unsigned long>(xb)) + xp + Int(1L));
            if (sup <= one) {  // sup V*(1+x) <= 1: accept
                x_arg_ = std::move(xp);
                x_bits_ = xb;
                return;
            }
            Int inf = v * (Int::pow2(static_cast<unsigned long>(xb)) + xp);
            if (inf >= one) break;  // inf V*(1+x) >= 1: reject
            if (vb + xb > policy_.max_bits + 4096)
                throw RefinementExhausted("acceptance test tie beyond bit budget");
            xp <<= 64;
            xp += take_bits(64);
            xb += 64;
            v <<= 64;
            v += take_bits(64);
            vb += 64;
        }
    }
    throw std::runtime_error("DigitStream: degenerate bit stream in rejection sampler");
}

void DigitStream::grow_precision(std::uint64_t target_bits) {
    if (kind_ == SamplerKind::rejection) {
        if (target_bits <= x_bits_) return;
        unsigned long extra = static_cast<unsigned long>(target_bits - x_bits_);
        x_arg_ <<= extra;
        x_arg_ += take_bits(extra);
        x_bits_ = target_bits;
    } else {
        while (chain_->bits() < target_bits) {
            unsigned long step = static_cast<unsigned long>(target_bits - chain_->bits());
            chain_->append_bits(take_bits(step), step);
            // boundary cells (all zeros / all ones) cannot bracket a digit;
            // spend more bits until the sample leaves them
            while (chain_->lower_is_one() || chain_->upper_at_top()) {
                if (chain_->bits() > policy_.max_bits + 1024)
                    throw RefinementExhausted("bit stream degenerate at max_bits");
                chain_->append_bits(take_bits(64), 64);
            }
        }
        x_bits_ = chain_->bits();
    }
}

void DigitStream::rebuild_from_base() {
    Int lo_num, hi_num;
    unsigned long lo_bits, hi_bits;
    if (kind_ == SamplerKind::rejection) {
        lo_num = x_arg_;
        hi_num = x_arg_ + Int(1L);
        lo_bits = hi_bits = static_cast<unsigned long>(x_bits_);
    } else {
        DyadicEnclosure enc = chain_->x_enclosure();
        lo_num = std::move(enc.lo_num);
        hi_num = std::move(enc.hi_num);
        lo_bits = enc.lo_bits;
        hi_bits = enc.hi_bits;
    }
    if (have_base_) {
        // refinement must stay inside the committed enclosure; directed
        // rounding could otherwise poke an ulp past the previous bounds
        dyadic_max(lo_num, lo_bits, base_lo_num_, base_lo_bits_);
        dyadic_min(hi_num, hi_bits, base_hi_num_, base_hi_bits_);
    }
    base_lo_num_ = lo_num;
    base_lo_bits_ = lo_bits;
    base_hi_num_ = hi_num;
    base_hi_bits_ = hi_bits;
    have_base_ = true;

    mpz_set(nlo_, base_lo_num_.raw());
    mpz_set_ui(dlo_, 0);
    mpz_setbit(dlo_, base_lo_bits_);
    mpz_set(nhi_, base_hi_num_.raw());
    mpz_set_ui(dhi_, 0);
    mpz_setbit(dhi_, base_hi_bits_);
}

void DigitStream::replay_digits() {
    auto big_it = big_digits_.cbegin();
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        // r_ = dhi - a*nhi (new lo num), t_ = dlo - a*nlo (new hi num)
        mpz_set(r_, dhi_);
        mpz_set(t_, dlo_);
        if (digits_[i] != UINT64_MAX) {
            unsigned long a = static_cast<unsigned long>(digits_[i]);
            mpz_submul_ui(r_, nhi_, a);
            mpz_submul_ui(t_, nlo_, a);
        } else {
            assert(big_it != big_digits_.cend() && big_it->first == i);
            mpz_submul(r_, nhi_, big_it->second.raw());
            mpz_submul(t_, nlo_, big_it->second.raw());
            ++big_it;
        }
        if (mpz_sgn(r_) < 0 || mpz_sgn(t_) < 0 || mpz_cmp(t_, nlo_) >= 0)
            throw std::logic_error("DigitStream: replay left the committed cylinder");
        mpz_swap(nlo_, r_);
        mpz_swap(dhi_, r_);
        mpz_swap(dlo_, nhi_);
        mpz_swap(nhi_, t_);
    }
}

void DigitStream::refine() {
    if (!src_) throw RefinementExhausted("fixed enclosure cannot be refined");
    if (x_bits_ >= policy_.max_bits)
        throw RefinementExhausted("refinement budget exhausted at max_bits");
    std::uint64_t target = std::max(x_bits_ * policy_.growth_factor, x_bits_ + 64);
    target = std::min(round_up_words(target), policy_.max_bits);
    grow_precision(target);
    rebuild_from_base();
    replay_digits();
    ++refinements_;
}

std::uint64_t DigitStream::next_digit() {
    for (;;) {
        if (mpz_sgn(nlo_) == 0 || mpz_sgn(nhi_) == 0) {
            refine();  // throws for fixed enclosures / exhausted rationals
            continue;
        }
        // candidate digit from the upper endpoint: a = floor(1/hi)
        mpz_fdiv_qr(q_, r_, dhi_, nhi_);
        bool small = mpz_fits_ulong_p(q_) != 0;
        unsigned long a = small ? mpz_get_ui(q_) : 0;
        if (small && a == 0) {  // hi >= 1: transient after an exact-boundary step
            refine();
            continue;
        }
        // same floor at the lower endpoint <=> 0 <= dlo - a*nlo < nlo
        if (small) {
            mpz_mul_ui(t_, nlo_, a);
        } else {
            mpz_mul(t_, nlo_, q_);
        }
        mpz_sub(t_, dlo_, t_);
        if (mpz_sgn(t_) < 0 || mpz_cmp(t_, nlo_) >= 0) {
            refine();
            continue;
        }
        if (mpz_sgn(r_) == 0 && src_) {
            // upper endpoint is exactly 1/(integer); the digit is certain
            // but the image would touch 0. Spend bits to stay strictly
            // inside (0,1). Fixed enclosures emit it and end afterwards.
            refine();
            continue;
        }
        std::uint64_t emitted;
        if (small) {
            emitted = a;
            digits_.push_back(a);
        } else {
            emitted = UINT64_MAX;  // saturated; exact value kept for replay
            digits_.push_back(UINT64_MAX);
            Int exact;
            mpz_set(exact.raw(), q_);
            big_digits_.emplace_back(digits_.size() - 1, std::move(exact));
        }
        // new lo = r_/nhi, new hi = t_/nlo (endpoints swap roles under 1/x - a)
        mpz_swap(nlo_, r_);
        mpz_swap(dhi_, r_);
        mpz_swap(dlo_, nhi_);
        mpz_swap(nhi_, t_);
        return emitted;
    }
}

RealInterval DigitStream::state() const {
    Int nl, dl, nh, dh;
    mpz_set(nl.raw(), nlo_);
    mpz_set(dl.raw(), dlo_);
    mpz_set(nh.raw(), nhi_);
    mpz_set(dh.raw(), dhi_);
    return RealInterval(Rational(std::move(nl), std::move(dl)),
                        Rational(std::move(nh), std::move(dh)), bits_drawn_);
}

std::vector<std::uint64_t> digits_of_rational(std::uint64_t p, std::uint64_t q,
                                              std::size_t max_count) {
    if (p == 0 || p >= q) throw std::invalid_argument("digits_of_rational: need 0 < p < q");
    std::vector<std::uint64_t> out;
    // Euclid on (q, p); the quotients are the digits, last one always >= 2
    std::uint64_t num = q, den = p;
    while (den != 0 && out.size() < max_count) {
        out.push_back(num / den);
        std::uint64_t r = num % den;
        num = den;
        den = r;
    }
    return out;
}

std::vector<std::uint64_t> digits_of_rational(const Rational& x, std::size_t max_count) {
    if (x.sgn() <= 0 || cmp(x, Rational(1L)) >= 0)
        throw std::invalid_argument("digits_of_rational: need 0 < x < 1");
    std::vector<std::uint64_t> out;
    Int num = x.den(), den = x.num(), q, r;
    while (!den.is_zero() && out.size() < max_count) {
        Int::fdiv_qr(q, r, num, den);
        if (!q.fits_uint64()) throw std::overflow_error("digits_of_rational: digit exceeds 64 bits");
        out.push_back(q.to_uint64());
        num = std::move(den);
        den = std::move(r);
    }
    return out;
}

}  // namespace cfx
