#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "msym/chars.hpp"
#include "msym/special.hpp"

using namespace msym;

TEST_CASE("modular arithmetic helpers") {
    CHECK(least_primitive_root(11) == 2);
    CHECK(least_primitive_root(17) == 3);
    CHECK(mod_inverse(3, 11) == 4);
    CHECK(positive_mod(-3, 11) == 8);
    CHECK(mod_pow(2, 10, 11) == 1);
    CHECK(is_prime(17));
    CHECK_FALSE(is_prime(21));
}

TEST_CASE("the order-5 character mod 11") {
    auto chi = DirichletCharacter::make(11, 2);
    CHECK(std::abs(chi(2) - std::polar(1.0, 2 * kPi / 5)) < 1e-15);
    CHECK(chi.order() == 5);
    CHECK(chi.is_even());
    CHECK_FALSE(chi.is_real());
    CHECK(chi(22) == cplx(0));
    for (long m = 1; m < 11; ++m)
        for (long n = 1; n < 11; ++n) CHECK(std::abs(chi(m * n) - chi(m) * chi(n)) < 1e-14);
    cplx total = 0;
    for (long n = 0; n < 11; ++n) total += chi(n);
    CHECK(std::abs(total) < 1e-14);
    CHECK(std::abs(chi.conj()(2) - std::conj(chi(2))) < 1e-15);
    CHECK(DirichletCharacter::from_json(chi.to_json()) == chi);
}

TEST_CASE("quadratic character mod 17 is the Legendre symbol") {
    auto chi = DirichletCharacter::make(17, 8);
    CHECK(chi.is_real());
    for (long n = 1; n < 17; ++n) {
        long ls = mod_pow(n, 8, 17) == 1 ? 1 : -1;
        CHECK(std::abs(chi(n) - cplx(static_cast<double>(ls))) < 1e-14);
    }
    CHECK(chi == chi.conj());
}

TEST_CASE("Gauss sums have absolute value sqrt(q)") {
    for (long k = 1; k < 10; ++k) {
        auto chi = DirichletCharacter::make(11, k);
        CHECK(std::abs(std::abs(gauss_sum(chi)) - std::sqrt(11.0)) < 1e-12);
    }
    // tau of the Legendre symbol mod 17 (17 = 1 mod 4) is +sqrt(17)
    CHECK(std::abs(gauss_sum(DirichletCharacter::make(17, 8)) - std::sqrt(17.0)) < 1e-12);
}

TEST_CASE("twisted divisor sums") {
    auto chi = DirichletCharacter::make(11, 2);
    // 12: divisors 1 2 3 4 6 12
    cplx want = 0;
    for (long d : {1, 2, 3, 4, 6, 12}) want += chi(d) * std::pow(static_cast<double>(d), 3.0);
    CHECK(std::abs(twisted_divisor_sum(3.0, 12, chi) - want) < 1e-9);
    CHECK(std::abs(twisted_divisor_sum(3.0, -12, chi) - want) < 1e-9);
    CHECK(std::abs(twisted_divisor_sum(cplx(0.5, 2.0), 1, chi) - 1.0) < 1e-15);
}

TEST_CASE("bad input is rejected") {
    CHECK_THROWS(DirichletCharacter::make(12, 1));
    CHECK_THROWS(mod_inverse(11, 22));
}
