#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "msym/dirichlet_l.hpp"

using namespace msym;

static double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

TEST_CASE("L-values against Hurwitz-zeta references") {
    auto chi = DirichletCharacter::make(11, 2);
    CHECK(rel(l_value(chi, 2.0), cplx(0.944311580057572273916, 0.160224332047482696284)) < 1e-12);
    CHECK(rel(l_value(chi, cplx(0.5, 3.0)), cplx(2.70290097416412414640, -0.766216047904846675292)) < 1e-11);
}

TEST_CASE("functional equation") {
    for (long k : {2L, 4L, 8L}) {
        auto chi = DirichletCharacter::make(11, k);
        for (cplx s : {cplx(0.2, 1.0), cplx(0.9, -14.0), cplx(0.5, 33.0)}) {
            cplx a = completed_l(chi, s), b = root_number(chi) * completed_l(chi.conj(), 1.0 - s);
            CHECK(rel(a, b) < 1e-9);
        }
    }
    CHECK(std::abs(std::abs(root_number(DirichletCharacter::make(11, 2))) - 1.0) < 1e-12);
}

TEST_CASE("trivial zeros of even characters") {
    auto chi = DirichletCharacter::make(11, 2);
    CHECK(std::abs(l_value(chi, -2.0)) < 1e-12);
    CHECK(std::abs(l_value(chi, 0.0)) < 1e-12);
}

TEST_CASE("zeros are certified and lie on L = 0") {
    auto chi = DirichletCharacter::make(17, 8);
    auto zc = find_zeros(chi, 20.0);
    CHECK(zc.argument_principle_count == static_cast<long>(zc.zeros.size()));
    CHECK(zc.zeros.size() > 0);
    CHECK(zc.max_residual() < 1e-9);
    for (auto& z : zc.zeros) {
        CHECK(std::abs(z.rho.real() - 0.5) < 1e-9);
        CHECK(std::abs(z.rho.imag()) <= 20.0);
        CHECK(rel(z.l_prime, l_derivative(chi, z.rho)) < 1e-6);
    }
    // a real character has zeros symmetric about the real axis
    for (auto& z : zc.zeros) {
        bool found = false;
        for (auto& w : zc.zeros) found = found || std::abs(w.rho - std::conj(z.rho)) < 1e-8;
        CHECK(found);
    }
    auto small = restrict_zeros(zc, 10.0);
    CHECK(small.zeros.size() < zc.zeros.size());
    auto empty = find_zeros(chi, 0.0);
    CHECK(empty.zeros.empty());
}

TEST_CASE("zero cache round trip") {
    auto chi = DirichletCharacter::make(11, 2);
    auto dir = std::filesystem::temp_directory_path() / "msym_test_zero_cache";
    std::filesystem::remove_all(dir);
    auto a = load_or_find_zeros(chi, 15.0, dir);
    auto b = load_or_find_zeros(chi, 15.0, dir);
    REQUIRE(a.zeros.size() == b.zeros.size());
    for (std::size_t i = 0; i < a.zeros.size(); ++i) CHECK(std::abs(a.zeros[i].rho - b.zeros[i].rho) < 1e-14);
    auto c = load_or_find_zeros(chi, 10.0, dir);  // served from the larger cache
    CHECK(c.zeros.size() <= a.zeros.size());
    std::filesystem::remove_all(dir);
}

TEST_CASE("Cauchy derivative of a polynomial") {
    auto f = [](cplx s) { return s * s * s; };
    CHECK(std::abs(cauchy_derivative(f, cplx(1.0, 1.0)) - 3.0 * cplx(1.0, 1.0) * cplx(1.0, 1.0)) < 1e-12);
    CHECK(std::abs(cauchy_residue([](cplx s) { return 2.0 / (s - 0.3); }, 0.3) - 2.0) < 1e-12);
}
