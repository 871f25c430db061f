#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "msym/modsym.hpp"

using namespace msym;

TEST_CASE("group elements") {
    GroupElement g = complete_matrix(22, 7);
    CHECK(g.a * g.d - g.b * g.c == 1);
    CHECK(g.in_gamma0(11));
    CHECK_FALSE(g.in_gamma0(7));
    GroupElement e = g * g.inverse();
    CHECK((e.a == 1 && e.b == 0 && e.c == 0 && e.d == 1));
    cplx z(0.3, 0.8);
    CHECK(std::abs(g.inverse().act(g.act(z)) - z) < 1e-13);
    CHECK(std::abs(std::imag(g.act(z)) - z.imag() / g.norm_at(z)) < 1e-15);
    CHECK_THROWS(complete_matrix(22, 4));
    auto neg = complete_matrix(-11, 3);
    CHECK(neg.a * neg.d - neg.b * neg.c == 1);
}

TEST_CASE("symbols do not depend on the base point") {
    CuspForm f(curve_by_label("E11a"));
    SymbolTable tab(f);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-0.5, 0.5), v(0.5, 2.0);
    for (int i = 0; i < 20; ++i) {
        long c = 11 * static_cast<long>(1 + rng() % 20);
        long d;
        do d = static_cast<long>(rng() % 600) - 300;
        while (std::gcd(c, d) != 1);
        GroupElement g = complete_matrix(c, d);
        cplx z1 = cplx(-static_cast<double>(d) + u(rng), v(rng)) / static_cast<double>(c);
        cplx z2 = cplx(-static_cast<double>(d) + 0.5 * u(rng), 2.0 * v(rng)) / static_cast<double>(c);
        cplx s = tab.symbol(g);
        CHECK(std::abs(s - modular_symbol_at(f, g, z1)) < 1e-9);
        CHECK(std::abs(s - modular_symbol_at(f, g, z2)) < 1e-9);
        CHECK(std::abs(s - tab.symbol_direct(g)) < 1e-10);
        CHECK(std::abs(s + tab.symbol(g.inverse())) < 1e-10);
        CHECK(std::abs(s - tab.symbol(-g)) < 1e-15);
    }
}

TEST_CASE("symbols are additive") {
    CuspForm f(curve_by_label("E11a"));
    SymbolTable tab(f);
    GroupElement g = complete_matrix(11, 2), h = complete_matrix(33, 5);
    CHECK(std::abs(tab.symbol(g * h) - tab.symbol(g) - tab.symbol(h)) < 1e-9);
    // translations carry no symbol
    CHECK(std::abs(tab.symbol(GroupElement{1, 5, 0, 1})) == 0.0);
}

TEST_CASE("symbols of E11a lie on the period lattice") {
    // the real parts are multiples of Omega/5 for the optimal curve; check rationality of ratios
    CuspForm f(curve_by_label("E11a"));
    SymbolTable tab(f);
    double base = 0;
    for (long d = 1; d < 11; ++d) base = std::max(base, std::abs(tab.symbol(complete_matrix(11, d)).real()));
    REQUIRE(base > 0);
    for (long d = 1; d < 22; d += 2) {
        if (d == 11) continue;
        double r = tab.symbol(complete_matrix(22, d)).real() / base * 10.0;
        CHECK(std::abs(r - std::round(r)) < 1e-8);
    }
}

TEST_CASE("policy limit") {
    CuspForm f(curve_by_label("E11a"));
    SymbolTable tab(f, 110);
    CHECK_NOTHROW(tab.symbol(complete_matrix(110, 1)));
    CHECK_THROWS_WITH_AS(tab.symbol(complete_matrix(121, 1)), doctest::Contains("policy limit"),
                         std::invalid_argument);
    tab.prefetch({11, 22, 33});
    CHECK(tab.cached_tables() >= 3);
}

TEST_CASE("coset enumeration") {
    const cplx z(0, 1);
    std::map<std::pair<long, long>, int> seen;
    long count = 0;
    coset_enum(11, z, 500.0, [&](const GroupElement& g, const CosetKey& k) {
        CHECK(g.in_gamma0(11));
        CHECK(g.norm_at(z) <= 500.0 + 1e-9);
        CHECK(k.c >= 0);
        ++seen[{k.c, k.d}];
        ++count;
    });
    for (auto& [k, n] : seen) CHECK(n == 1);
    // direct count of (c, d), 11 | c, c > 0, gcd = 1, c^2 + d^2 <= 500, plus the identity
    long want = 1;
    for (long c = 11; c * c <= 500; c += 11)
        for (long d = -30; d <= 30; ++d)
            if (std::gcd(c, d) == 1 && c * c + d * d <= 500) ++want;
    CHECK(count == want);
    CHECK(coset_c_limit(11, z, 500.0) == 22);

    long dc = 0;
    double_coset_enum(11, 33, [&](const GroupElement& g, const DoubleCosetKey& k) {
        CHECK(g.in_gamma0(11));
        CHECK((k.d_mod_c >= 0 && k.d_mod_c < k.c));
        ++dc;
    });
    CHECK(dc == 10 + 10 + 20);  // phi(11) + phi(22) + phi(33)
}
