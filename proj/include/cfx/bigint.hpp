#pragma once

#include <gmp.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace cfx {

/// Arbitrary-precision signed integer. Thin RAII wrapper over GMP's mpz_t
/// with just the operations this project needs. Value-semantic.
class Int {
  public:
    Int() { mpz_init(z_); }
    Int(long v) { mpz_init_set_si(z_, v); }
    Int(unsigned long v) { mpz_init_set_ui(z_, v); }
    Int(int v) : Int(static_cast<long>(v)) {}
    explicit Int(const std::string& decimal) {
        if (mpz_init_set_str(z_, decimal.c_str(), 10) != 0) {
            mpz_clear(z_);
            throw std::invalid_argument("Int: bad decimal string: " + decimal);
        }
    }
    Int(const Int& o) { mpz_init_set(z_, o.z_); }
    Int(Int&& o) noexcept {
        mpz_init(z_);
        mpz_swap(z_, o.z_);
    }
    Int& operator=(const Int& o) {
        if (this != &o) mpz_set(z_, o.z_);
        return *this;
    }
    Int& operator=(Int&& o) noexcept {
        mpz_swap(z_, o.z_);
        return *this;
    }
    ~Int() { mpz_clear(z_); }

    static Int from_uint64(std::uint64_t v) {
        Int r;
        mpz_import(r.z_, 1, 1, sizeof(v), 0, 0, &v);
        return r;
    }
    /// 2^k
    static Int pow2(unsigned long k) {
        Int r;
        mpz_setbit(r.z_, k);
        return r;
    }

    friend Int operator+(const Int& a, const Int& b) {
        Int r;
        mpz_add(r.z_, a.z_, b.z_);
        return r;
    }
    friend Int operator-(const Int& a, const Int& b) {
        Int r;
        mpz_sub(r.z_, a.z_, b.z_);
        return r;
    }
    friend Int operator*(const Int& a, const Int& b) {
        Int r;
        mpz_mul(r.z_, a.z_, b.z_);
        return r;
    }
    friend Int operator-(const Int& a) {
        Int r;
        mpz_neg(r.z_, a.z_);
        return r;
    }
    Int& operator+=(const Int& o) {
        mpz_add(z_, z_, o.z_);
        return *this;
    }
    Int& operator-=(const Int& o) {
        mpz_sub(z_, z_, o.z_);
        return *this;
    }
    Int& operator*=(const Int& o) {
        mpz_mul(z_, z_, o.z_);
        return *this;
    }
    Int& operator*=(unsigned long v) {
        mpz_mul_ui(z_, z_, v);
        return *this;
    }
    Int& operator<<=(unsigned long k) {
        mpz_mul_2exp(z_, z_, k);
        return *this;
    }
    Int& operator>>=(unsigned long k) {  // floor shift
        mpz_fdiv_q_2exp(z_, z_, k);
        return *this;
    }
    friend Int operator<<(const Int& a, unsigned long k) {
        Int r;
        mpz_mul_2exp(r.z_, a.z_, k);
        return r;
    }

    /// Floor division (q = floor(a/b)).
    static Int fdiv_q(const Int& a, const Int& b) {
        Int q;
        mpz_fdiv_q(q.z_, a.z_, b.z_);
        return q;
    }
    /// Ceiling division.
    static Int cdiv_q(const Int& a, const Int& b) {
        Int q;
        mpz_cdiv_q(q.z_, a.z_, b.z_);
        return q;
    }
    static void fdiv_qr(Int& q, Int& r, const Int& a, const Int& b) {
        mpz_fdiv_qr(q.z_, r.z_, a.z_, b.z_);
    }
    static Int gcd(const Int& a, const Int& b) {
        Int g;
        mpz_gcd(g.z_, a.z_, b.z_);
        return g;
    }

    int sgn() const { return mpz_sgn(z_); }
    bool is_zero() const { return mpz_sgn(z_) == 0; }
    bool is_one() const { return mpz_cmp_ui(z_, 1) == 0; }
    bool odd() const { return mpz_odd_p(z_) != 0; }
    friend int cmp(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_); }
    friend bool operator==(const Int& a, const Int& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const Int& a, const Int& b) { return cmp(a, b) != 0; }
    friend bool operator<(const Int& a, const Int& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const Int& a, const Int& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const Int& a, const Int& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const Int& a, const Int& b) { return cmp(a, b) >= 0; }

    bool fits_uint64() const {
        if (mpz_sgn(z_) < 0) return false;
        return mpz_sizeinbase(z_, 2) <= 64;
    }
    std::uint64_t to_uint64() const {
        std::uint64_t out = 0;
        mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, z_);
        return out;
    }
    long to_long() const { return mpz_get_si(z_); }
    double to_double() const { return mpz_get_d(z_); }
    /// Number of bits in |value| (0 for value 0).
    std::size_t bit_length() const { return is_zero() ? 0 : mpz_sizeinbase(z_, 2); }
    /// Index of lowest set bit, or SIZE_MAX when zero.
    std::size_t lowest_set_bit() const {
        auto r = mpz_scan1(z_, 0);
        return r == ULONG_MAX ? static_cast<std::size_t>(-1) : r;
    }

    std::string str() const {
        char* s = mpz_get_str(nullptr, 10, z_);
        std::string out(s);
        void (*freefn)(void*, size_t);
        mp_get_memory_functions(nullptr, nullptr, &freefn);
        freefn(s, out.size() + 1);
        return out;
    }

    mpz_ptr raw() { return z_; }
    mpz_srcptr raw() const { return z_; }

  private:
    mpz_t z_;
};

}  // namespace cfx
