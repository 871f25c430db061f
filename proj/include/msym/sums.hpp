#pragma once

#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "msym/chars.hpp"
#include "msym/modsym.hpp"

namespace msym {

struct SumTrace {
    std::vector<double> x_grid;
    std::vector<cplx> values;
    std::map<std::string, std::string> meta;
    bool truncated = false;  // grid cut short by the c policy
    std::string error;

    void validate() const;
    void write_csv(std::ostream& out) const;
};

// S(X) = sum chi(d) <gamma, f> over cosets with |cz+d|^2 <= Im(z) X.
SumTrace geometric_twisted_sum(const SymbolTable& tab, const DirichletCharacter& chi, cplx z,
                               const std::vector<double>& x_grid, int jobs = 0);
// S(X) = sum chi(d) <gamma, f> over double cosets with c < X^{1/2}.
SumTrace arithmetic_twisted_sum(const SymbolTable& tab, const DirichletCharacter& chi,
                                const std::vector<double>& x_grid, int jobs = 0);

struct KloostermanPartial {
    long n = 0;
    cplx s;
    cplx prefactor;              // sqrt(pi) Gamma(s-1/2)/Gamma(s), or pi^s |n|^{s-1}/Gamma(s)
    std::vector<long> c;         // block moduli N, 2N, ...
    std::vector<cplx> block;     // sum_{d mod c} chi(d) c^{-2s} e(n a/c) <gamma, f>
    std::vector<cplx> partial;   // running sums of block (bare, no prefactor)

    cplx bare() const { return partial.empty() ? cplx(0) : partial.back(); }
    cplx value() const { return prefactor * bare(); }
};

KloostermanPartial kloosterman_star_partial(const SymbolTable& tab, const DirichletCharacter& chi, long n, cplx s,
                                            long c_max, int jobs = 0);

// h(u, v; s) = sum_k ((u+k)^2 + v^2)^{-s}
cplx lattice_h(double u, double v, cplx s);

enum class EisensteinMode { plain, completed };
enum class Cusp { infinity, zero };

struct BruteValue {
    cplx value;
    double tail_estimate = 0;  // size of the last half of the block range
};

// Cosets {identity} U {c > 0}; chi(gamma) = chi(d). Cusp zero evaluates E(-1/(Nz)).
BruteValue eisenstein_brute(long N, const DirichletCharacter& chi, cplx z, cplx s, EisensteinMode mode, Cusp cusp,
                            long c_max);
// E*(z, s) = sum chi(d) <gamma, f> Im(gamma z)^s
BruteValue estar_brute(const SymbolTable& tab, const DirichletCharacter& chi, cplx z, cplx s, long c_max,
                       int jobs = 0);

// Samples of g(x + iy) at x_j = j/nodes, and the nth Fourier coefficient from them.
std::vector<cplx> horocycle_samples(const std::function<cplx(cplx)>& g, double y, int nodes = 256, int jobs = 0);
cplx fourier_coefficient(const std::vector<cplx>& samples, long n);

// count points log-spaced from lo to hi inclusive
std::vector<double> log_grid(double lo, double hi, int count);
// least-squares slope of log|y| against log x over entries with y != 0
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
// max_{X' <= X} |S(X')|
std::vector<double> running_max_envelope(const std::vector<cplx>& values);

}  // namespace msym
