#include "cfx/rational.hpp"

#include <cmath>
#include <numbers>

namespace cfx {

double Rational::to_double() const {
    // mpq gives correctly rounded rational-to-double conversion
    mpq_t q;
    mpq_init(q);
    mpz_set(mpq_numref(q), num_.raw());
    mpz_set(mpq_denref(q), den_.raw());
    double d = mpq_get_d(q);
    mpq_clear(q);
    return d;
}

namespace gauss_measure {

double cdf(double x) { return std::log1p(x) / std::numbers::ln2; }

double of_interval(const Rational& a, const Rational& b) {
    if (a.sgn() < 0 || cmp(b, Rational(1L)) > 0 || cmp(a, b) > 0)
        throw std::domain_error("gauss_measure::of_interval: need 0 <= a <= b <= 1");
    // log((1+b)/(1+a)) = log1p((b-a)/(1+a)), evaluated without cancellation
    Rational ratio = (b - a) / (a + Rational(1L));
    return std::log1p(ratio.to_double()) / std::numbers::ln2;
}

}  // namespace gauss_measure

}  // namespace cfx
