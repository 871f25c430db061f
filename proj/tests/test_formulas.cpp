#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "msym/config.hpp"
#include "msym/formulas.hpp"

using namespace msym;

static double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

namespace {
struct Setup {
    CuspForm f{curve_by_label("E11a")};
    DirichletCharacter chi = DirichletCharacter::make(11, 2);
    ZeroCache zc = find_zeros(chi, 20.0);
    ZeroCache zcb = find_zeros(chi.conj(), 20.0);
};
Setup& setup() {
    static Setup s;
    return s;
}
}  // namespace

TEST_CASE("Eisenstein Fourier coefficients at the cusp 0 against brute force") {
    auto chi = DirichletCharacter::make(11, 2);
    auto smp = horocycle_samples(
        [&](cplx z) {
            return static_cast<double>(kCosetFactor) *
                   eisenstein_brute(11, chi, z, 2.0, EisensteinMode::completed, Cusp::zero, 1500).value;
        },
        1.0, 64);
    for (long n : {0L, 1L, -2L}) CHECK(rel(fourier_coefficient(smp, n), lemma22_fourier(chi, 2.0, n, 1.0, Cusp::zero)) < 1e-8);
    // the printed constant term differs by N^{6w-2}
    cplx a = lemma22_fourier(chi, 2.0, 0, 1.0, Cusp::zero, Lemma22Variant::printed);
    cplx b = lemma22_fourier(chi, 2.0, 0, 1.0, Cusp::zero);
    CHECK(rel(a, b * std::pow(11.0, 10.0)) < 1e-12);
}

TEST_CASE("constant term at infinity is 2 y^w L(2w, chi)") {
    auto chi = DirichletCharacter::make(11, 2);
    cplx w(1.7, 0.4);
    CHECK(rel(lemma22_fourier(chi, w, 0, 1.3, Cusp::infinity), 2.0 * std::pow(1.3, w) * l_value(chi, 2.0 * w)) < 1e-13);
    CHECK_THROWS(lemma22_fourier(DirichletCharacter::make(11, 1), w, 0, 1.0, Cusp::infinity));  // odd
}

TEST_CASE("central value and the closed forms for the constant term") {
    auto& s = setup();
    CHECK(rel(central_value(s.f, s.chi), cplx(0.610453446527, -0.799534195530)) < 1e-10);
    cplx c = cor14_phi_star_zero(s.f, s.chi, 2.0);
    CHECK(rel(c, cplx(0, -7.879e-4)) < 1e-3);
    cplx t = thm12_constant_term(s.f, s.chi, 2.0, 1.0);
    CHECK(rel(t, std::sqrt(kPi) * gamma_complex(1.5) / gamma_complex(2.0) * c) < 1e-13);
    cplx d = phi_star_zero_derived(s.f, s.chi, 2.0);
    CHECK(rel(d, cplx(0, -1.9569727778e-4)) < 1e-8);
}

TEST_CASE("truncation settings are validated") {
    TruncationSpec t;
    CHECK_NOTHROW(t.validate());
    t.n_max = 0;
    CHECK_THROWS(t.validate());
    t = {};
    t.T = -1;
    CHECK_THROWS(t.validate());
}

TEST_CASE("non-Maass lines") {
    auto& s = setup();
    TruncationSpec tr;
    tr.T = 20;
    auto br = thm13_nonmaass(s.f, s.zc, s.zcb, 2.0, 1, 1.0, tr);
    CHECK_FALSE(br.line("maass").available);
    CHECK(std::isfinite(std::abs(br.total)));
    cplx sum = 0;
    for (auto& l : br.lines)
        if (l.available) sum += l.value;
    CHECK(std::abs(sum - br.total) < 1e-14 * (1 + std::abs(sum)));
    CHECK(br.to_json().contains("lines"));
    CHECK_THROWS(br.line("nonexistent"));
    TruncationSpec big = tr;
    big.T = 30;
    CHECK_THROWS(thm13_nonmaass(s.f, s.zc, s.zcb, 2.0, 1, 1.0, big));  // caches only reach 20
    CHECK_THROWS(thm13_nonmaass(s.f, s.zc, s.zc, 2.0, 1, 1.0, tr));    // needs the chibar cache
}

TEST_CASE("main term modes") {
    auto& s = setup();
    TruncationSpec tr;
    tr.T = 20;
    Thm11MainTerm lit(s.f, s.zc, s.zcb, cplx(0, 1), MainTermMode::literal, tr);
    CHECK(std::abs(lit(1e4)) == 0.0);
    Thm11MainTerm res(s.f, s.zc, s.zcb, cplx(0, 1), MainTermMode::residue, tr);
    CHECK(res.terms() > 0);
    CHECK(std::abs(res(1e4)) > 0);
    // a real character has no main term
    auto chi17 = DirichletCharacter::make(17, 8);
    CuspForm f17(curve_by_label("E17a"));
    auto z17 = find_zeros(chi17, 15.0);
    Thm11MainTerm real(f17, z17, z17, cplx(0, 1), MainTermMode::residue, TruncationSpec{15, 12, 8, -10});
    CHECK(std::abs(real(1e4)) < 1e-12);
}

TEST_CASE("explicit formula for the arithmetic ordering") {
    auto& s = setup();
    TruncationSpec tr;
    tr.T = 20;
    Thm15Rhs printed(s.f, s.zc, s.zcb, tr), derived(s.f, s.zc, s.zcb, tr, Thm15Variant::derived);
    CHECK(std::isfinite(std::abs(printed(1.5e4))));
    // the rederived formula tracks the brute-force sum to within the truncation error
    SymbolTable tab(s.f);
    auto lhs = arithmetic_twisted_sum(tab, s.chi, {1.5e4});
    CHECK(std::abs(derived(1.5e4) - lhs.values[0]) < 0.25 * std::abs(lhs.values[0]));
    auto terms = printed.zero_terms(1.5e4);
    CHECK(terms.size() > s.zc.zeros.size());
}
