#include <doctest.h>

#include <cmath>

#include "lipsharp/dyadic.hpp"
#include "lipsharp/exp2.hpp"
#include "lipsharp/quadrature.hpp"

using lipsharp::num::adaptive_simpson;
using lipsharp::num::BigInt;
using lipsharp::num::cmp_exp_neg;
using lipsharp::num::Dyadic;
using lipsharp::num::Exp2;

TEST_CASE("Exp2 arithmetic") {
    const Exp2 a = Exp2::from_double(3.5);
    const Exp2 b = Exp2::from_double(-0.125);
    CHECK((a * b).to_double() == doctest::Approx(-0.4375));
    CHECK((a + b).to_double() == doctest::Approx(3.375));
    CHECK((a - b).to_double() == doctest::Approx(3.625));
    CHECK((a / b).to_double() == doctest::Approx(-28.0));
    CHECK(Exp2::pow2(-546).log2_abs() == doctest::Approx(-546.0));
    CHECK(Exp2::pow2(10).to_double() == 1024.0);
    CHECK(Exp2::from_double(2.0).sqrt_nonneg().to_double() == doctest::Approx(std::sqrt(2.0)));

    // far outside the double range
    const Exp2 tiny = Exp2::pow2(-2000);
    const Exp2 tiny2 = tiny * tiny;
    CHECK(tiny2.e == -3999);  // 0.5 * 2^{-3999}
    CHECK(tiny2 < tiny);
    CHECK((tiny - tiny).is_zero());
    CHECK(Exp2::pow2(1913).log2_abs() == doctest::Approx(1913.0));

    // addition with exponent gap beyond the mantissa keeps the larger value
    CHECK((Exp2::pow2(100) + Exp2::pow2(-100)) == Exp2::pow2(100));
}

TEST_CASE("Dyadic exact arithmetic and canonical form") {
    const Dyadic half = Dyadic::pow2_neg(1);
    const Dyadic q = Dyadic(3) * half * half;  // 3/4
    CHECK(q.numerator() == 3);
    CHECK(q.exponent() == 2);
    CHECK((q + q).str() == "3/2^1");
    CHECK((q - q).is_zero());
    CHECK((Dyadic(2) * Dyadic::pow2_neg(1)).str() == "1");  // canonicalized
    CHECK(q < Dyadic(1));
    CHECK(q.pow(2) == Dyadic(9) * Dyadic::pow2_neg(4));

    CHECK(Dyadic::from_double(0.375).str() == "3/2^3");
    CHECK(Dyadic::from_double(-1.0) == Dyadic(-1));

    // floor semantics, including negatives
    CHECK(Dyadic(BigInt(7), 1).floor() == 3);    // 3.5
    CHECK(Dyadic(BigInt(-7), 1).floor() == -4);  // -3.5
    CHECK(Dyadic(BigInt(-8), 1).floor() == -4);  // exact -4
    CHECK(Dyadic(5).floor() == 5);

    // to_exp2 with numerators wider than 62 bits
    const Dyadic big = Dyadic::pow2_pos(200) + Dyadic(1);
    CHECK(big.to_exp2().log2_abs() == doctest::Approx(200.0));
    CHECK(Dyadic::pow2_neg(819).to_exp2().e == -818);  // 0.5 * 2^{-818}
}

TEST_CASE("exact comparison against e^{-x}") {
    // e^{-1} = 0.36787944...
    CHECK(cmp_exp_neg(Dyadic(5) * Dyadic::pow2_neg(4), Dyadic(1)) < 0);    // 0.3125
    CHECK(cmp_exp_neg(Dyadic(45) * Dyadic::pow2_neg(6), Dyadic(1)) > 0);   // 0.703125
    CHECK(cmp_exp_neg(Dyadic::from_double(0.367879442), Dyadic(1)) > 0);
    CHECK(cmp_exp_neg(Dyadic::from_double(0.367879441), Dyadic(1)) < 0);
    // e^{-2} = 0.13533528...
    CHECK(cmp_exp_neg(Dyadic(9) * Dyadic::pow2_neg(6), Dyadic(2)) > 0);   // 0.140625
    CHECK(cmp_exp_neg(Dyadic::pow2_neg(3), Dyadic(2)) < 0);               // 0.125
    // e^{-1/8} = 0.8824969...
    CHECK(cmp_exp_neg(Dyadic::from_double(0.883), Dyadic::pow2_neg(3)) > 0);
    CHECK(cmp_exp_neg(Dyadic::from_double(0.882), Dyadic::pow2_neg(3)) < 0);
}

TEST_CASE("adaptive quadrature") {
    auto r1 = adaptive_simpson([](double t) { return t * t; }, 0.0, 1.0, 1e-12);
    CHECK(r1.converged);
    CHECK(r1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

    auto r2 = adaptive_simpson([](double t) { return 1.0 / std::sqrt(t); }, 1e-6, 1.0, 1e-10);
    CHECK(r2.converged);
    CHECK(r2.value == doctest::Approx(2.0 * (1.0 - 1e-3)).epsilon(1e-8));
}
