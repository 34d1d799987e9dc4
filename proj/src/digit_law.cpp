#include "cfx/digit_law.hpp"

#include <mpfr.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cfx {

double digit_tail_prob(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("digit_tail_prob: k must be >= 1");
    return std::log1p(1.0 / static_cast<double>(k)) / std::numbers::ln2;
}

double digit_pmf(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("digit_pmf: k must be >= 1");
    double kk = static_cast<double>(k);
    return std::log1p(1.0 / (kk * (kk + 2.0))) / std::numbers::ln2;
}

std::uint64_t scaled_threshold(std::uint64_t n, double u) {
    if (n == 0 || !(u > 0.0) || !std::isfinite(u))
        throw std::invalid_argument("scaled_threshold: need n >= 1 and finite u > 0");
    // m = floor(n*u/log2) + 1. The quotient is never an integer (n*u is
    // rational, log 2 irrational), but near-integer cases are resolved by
    // recomputing at higher precision until the floor is certified.
    for (mpfr_prec_t prec = 192; prec <= (1 << 14); prec *= 4) {
        mpfr_t q, f;
        mpfr_init2(q, prec);
        mpfr_init2(f, prec);
        mpfr_set_d(q, u, MPFR_RNDN);  // exact
        mpfr_mul_ui(q, q, static_cast<unsigned long>(n), MPFR_RNDN);
        mpfr_t l2;
        mpfr_init2(l2, prec);
        mpfr_const_log2(l2, MPFR_RNDN);
        mpfr_div(q, q, l2, MPFR_RNDN);
        mpfr_floor(f, q);
        mpfr_sub(q, q, f, MPFR_RNDN);  // fractional part, up to ~4 ulp slop
        // certified when frac and 1-frac both clear the rounding slop
        mpfr_t slop;
        mpfr_init2(slop, 64);
        mpfr_set_ui_2exp(slop, 1, -static_cast<long>(prec) + 8, MPFR_RNDN);
        bool frac_ok = mpfr_cmp(q, slop) > 0;
        mpfr_ui_sub(q, 1, q, MPFR_RNDN);
        bool cofrac_ok = mpfr_cmp(q, slop) > 0;
        std::uint64_t m = 0;
        bool decided = frac_ok && cofrac_ok;
        if (decided) {
            if (mpfr_cmp_ui(f, 0) < 0) {
                m = 1;  // n*u < log2
            } else {
                mpz_t z;
                mpz_init(z);
                mpfr_get_z(z, f, MPFR_RNDZ);  // f holds an exact integer
                if (mpz_sizeinbase(z, 2) >= 64) {
                    m = std::numeric_limits<std::uint64_t>::max();  // beyond any digit
                } else {
                    std::uint64_t fl = 0;
                    mpz_export(&fl, nullptr, 1, sizeof(fl), 0, 0, z);
                    m = fl + 1;
                }
                mpz_clear(z);
            }
        }
        mpfr_clears(q, f, l2, slop, (mpfr_ptr) nullptr);
        if (decided) return m;
    }
    throw std::runtime_error("scaled_threshold: could not certify threshold value");
}

}  // namespace cfx
