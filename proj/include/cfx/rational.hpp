#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "cfx/bigint.hpp"

namespace cfx {

/// Exact rational number, always stored in lowest terms with a positive
/// denominator. Every operation is exact; nothing here ever rounds.
class Rational {
  public:
    Rational() : num_(0L), den_(1L) {}
    Rational(long v) : num_(v), den_(1L) {}
    Rational(Int num, Int den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    Rational(long num, long den) : num_(num), den_(den) { normalize(); }

    /// num / 2^k, reduced.
    static Rational dyadic(Int num, unsigned long k) {
        // common factor is a power of two; strip it without a full gcd
        if (!num.is_zero()) {
            std::size_t tz = num.lowest_set_bit();
            if (tz > k) tz = k;
            num >>= tz;
            k -= static_cast<unsigned long>(tz);
        } else {
            k = 0;
        }
        Rational r;
        r.num_ = std::move(num);
        r.den_ = Int::pow2(k);
        return r;
    }

    const Int& num() const { return num_; }
    const Int& den() const { return den_; }
    int sgn() const { return num_.sgn(); }
    bool is_zero() const { return num_.is_zero(); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend Rational operator-(const Rational& a) {
        Rational r = a;
        r.num_ = -r.num_;
        return r;
    }

    Rational reciprocal() const {
        if (is_zero()) throw std::domain_error("Rational: reciprocal of zero");
        return Rational(den_, num_);
    }

    /// floor(value) as an Int.
    Int floor() const { return Int::fdiv_q(num_, den_); }

    friend int cmp(const Rational& a, const Rational& b) {
        return cmp(a.num_ * b.den_, b.num_ * a.den_);
    }
    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a, b) != 0; }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a, b) >= 0; }

    double to_double() const;

    std::string str() const { return num_.str() + "/" + den_.str(); }

  private:
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
        if (den_.sgn() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_.is_zero()) {
            den_ = Int(1L);
            return;
        }
        Int g = Int::gcd(num_, den_);
        if (!g.is_one()) {
            num_ = Int::fdiv_q(num_, g);  // exact
            den_ = Int::fdiv_q(den_, g);
        }
    }

    Int num_;
    Int den_;
};

/// Enclosure of a sample point of (0,1) by two exact rationals. The true
/// point lies in [lo, hi] with certainty; refinement only ever shrinks it.
/// A degenerate interval (lo == hi) represents an exactly known rational
/// point, used by tests and the rational-digit oracle.
struct RealInterval {
    Rational lo;
    Rational hi;
    std::uint64_t bit_budget_used = 0;

    RealInterval() = default;
    RealInterval(Rational lo_, Rational hi_, std::uint64_t bits_used = 0)
        : lo(std::move(lo_)), hi(std::move(hi_)), bit_budget_used(bits_used) {
        if (lo.sgn() <= 0 || cmp(hi, Rational(1L)) >= 0 || cmp(lo, hi) > 0)
            throw std::domain_error("RealInterval: endpoints must satisfy 0 < lo <= hi < 1");
    }

    Rational width() const { return hi - lo; }
    bool contains(const Rational& x) const { return cmp(lo, x) <= 0 && cmp(x, hi) <= 0; }
    bool contains(const RealInterval& other) const {
        return cmp(lo, other.lo) <= 0 && cmp(other.hi, hi) <= 0;
    }
};

namespace gauss_measure {

/// Gauss measure density at x is 1/((1+x) log 2); cdf is log2(1+x).
double cdf(double x);

/// Measure of (a, b) for exact rational endpoints, 0 <= a < b <= 1,
/// evaluated in double precision.
double of_interval(const Rational& a, const Rational& b);

}  // namespace gauss_measure

}  // namespace cfx
