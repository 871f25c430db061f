#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "msym/special.hpp"

using namespace msym;

static double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

TEST_CASE("gamma") {
    CHECK(rel(gamma_complex(5.0), 24.0) < 1e-14);
    CHECK(rel(gamma_complex(0.5), std::sqrt(kPi)) < 1e-14);
    // reference from an independent arbitrary-precision evaluation
    CHECK(rel(gamma_complex(cplx(0.3, 4.0)), cplx(0.00116464368481149056, 0.00335255988803520244)) < 1e-12);
    // reflection
    cplx s(0.3, 7.0);
    CHECK(rel(gamma_complex(s) * gamma_complex(1.0 - s), kPi / std::sin(kPi * s)) < 1e-11);
    CHECK(std::abs(rgamma_complex(-3.0)) < 1e-300);
    long k = 0;
    CHECK(is_nonpositive_integer(cplx(-4.0, 0.0), &k));
    CHECK(k == 4);
    CHECK_FALSE(is_nonpositive_integer(cplx(-4.0, 1e-3)));
    CHECK_THROWS_AS(gamma_complex(-2.0), PoleError);
}

TEST_CASE("K-Bessel against reference values") {
    CHECK(rel(bessel_k(0.0, 1.0), 0.421024438240708333335627) < 1e-13);
    CHECK(rel(bessel_k(cplx(1.1, -3), 40.0), cplx(7.59774966790533154e-19, -6.21034571591037967e-20)) < 1e-10);
    CHECK(rel(bessel_k(cplx(0.25, -20), 1.0), cplx(-1.77651501960994312e-14, 1.68227478719478822e-15)) < 1e-9);
    CHECK(rel(bessel_k(cplx(1.5, 0.3), 7.0), cplx(4.89875772455932942e-4, 2.94048847317321441e-5)) < 1e-11);
}

TEST_CASE("K-Bessel closed form and symmetry") {
    for (double x : {0.1, 1.0, 5.0, 30.0})
        CHECK(rel(bessel_k(0.5, x), std::sqrt(kPi / (2 * x)) * std::exp(-x)) < 1e-12);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> re(-2, 2), im(-40, 40), xs(0.3, 20);
    for (int i = 0; i < 20; ++i) {
        cplx nu(re(rng), im(rng));
        double x = xs(rng);
        CHECK(rel(bessel_k(-nu, x), bessel_k(nu, x)) < 1e-10);
    }
    // recurrence K_{v+1} = K_{v-1} + (2v/x) K_v
    cplx v(0.7, 2.5);
    double x = 3.0;
    CHECK(rel(bessel_k(v + 1.0, x), bessel_k(v - 1.0, x) + 2.0 * v / x * bessel_k(v, x)) < 1e-11);
    CHECK_THROWS(bessel_k(1.0, -1.0));
}

TEST_CASE("Hurwitz zeta") {
    CHECK(rel(hurwitz_zeta(2.0, 1.0).value, kPi * kPi / 6) < 1e-13);
    CHECK(rel(hurwitz_zeta(3.0, 0.25).value, 64.6638699687684601666689835894) < 1e-13);
}

TEST_CASE("compensated summation") {
    CompensatedSum<double> s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-17);
    s.add(-1.0);
    CHECK(std::abs(s.value() - 1e-14) < 1e-20);
}
