#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "msym/chars.hpp"
#include "msym/special.hpp"

namespace msym {

enum class ZeroKind { nontrivial, trivial };

struct LZero {
    cplx rho;
    cplx l_prime;
    int height_index = 0;
    ZeroKind kind = ZeroKind::nontrivial;
};

class ZeroCertificationError : public std::runtime_error {
public:
    ZeroCertificationError(const std::string& what, double t_lo, double t_hi)
        : std::runtime_error(what), t_lo_(t_lo), t_hi_(t_hi) {}
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }

private:
    double t_lo_, t_hi_;
};

struct ZeroCache {
    DirichletCharacter chi;
    double T = 0;
    std::vector<LZero> zeros;      // nontrivial, sorted by Im
    std::vector<LZero> trivial;    // 0, -2, -4, ...
    long argument_principle_count = 0;
    double certified_height = 0;   // edge of the certified rectangle (>= T)

    nlohmann::json to_json() const;
    static ZeroCache from_json(const nlohmann::json& j);
    // largest |L(rho)| over stored nontrivial zeros
    double max_residual() const;
};

cplx l_value(const DirichletCharacter& chi, cplx s);
cplx l_derivative(const DirichletCharacter& chi, cplx s);
// Cauchy-circle derivative of an arbitrary analytic function.
template <class F>
cplx cauchy_derivative(F&& f, cplx s, double r = 0.05, int nodes = 32) {
    cplx acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        cplx e = std::polar(1.0, 2.0 * kPi * j / nodes);
        acc += f(s + r * e) / e;
    }
    return acc / (r * nodes);
}
// (1/2 pi i) \oint f over |u - s| = r
template <class F>
cplx cauchy_residue(F&& f, cplx s, double r = 0.05, int nodes = 64) {
    cplx acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        cplx e = std::polar(1.0, 2.0 * kPi * j / nodes);
        acc += f(s + r * e) * e;
    }
    return acc * r / static_cast<double>(nodes);
}

cplx root_number(const DirichletCharacter& chi);
// Lambda(s) = (q/pi)^{s/2} Gamma(s/2) L(s)
cplx completed_l(const DirichletCharacter& chi, cplx s);
// Real on the critical line: e^{i theta(t)} L(1/2+it)
double hardy_z(const DirichletCharacter& chi, double t);

struct ZeroSearchOptions {
    double step = 0.02;
    int max_refinements = 3;
    int jobs = 0;  // 0: hardware concurrency
};

ZeroCache find_zeros(const DirichletCharacter& chi, double T, const ZeroSearchOptions& opt = {});
// Disk-backed: reuse a cache for (chi, T') with T' >= T after revalidation.
ZeroCache load_or_find_zeros(const DirichletCharacter& chi, double T,
                             const std::optional<std::filesystem::path>& cache_dir,
                             const ZeroSearchOptions& opt = {});
// Zeros of chi with |Im| <= T restricted from a larger cache.
ZeroCache restrict_zeros(const ZeroCache& z, double T);

enum class ResidueScaling { unit, half };
cplx residue_inv_l(const DirichletCharacter& chi, const LZero& z, ResidueScaling scaling);

// Winding number of L(., chi) around the rectangle [sig0,sig1] x [t0,t1].
long argument_principle_count(const DirichletCharacter& chi, double sig0, double sig1, double t0,
                              double t1);

}  // namespace msym
