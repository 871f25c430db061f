#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "msym/cuspform.hpp"

namespace msym {

struct GroupElement {
    long a = 1, b = 0, c = 0, d = 1;

    bool in_gamma0(long N) const { return a * d - b * c == 1 && c % N == 0; }
    GroupElement inverse() const { return {d, -b, -c, a}; }
    GroupElement operator*(const GroupElement& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    GroupElement operator-() const { return {-a, -b, -c, -d}; }
    cplx act(cplx z) const {
        return (static_cast<double>(a) * z + static_cast<double>(b)) /
               (static_cast<double>(c) * z + static_cast<double>(d));
    }
    // |cz+d|^2
    double norm_at(cplx z) const { return std::norm(static_cast<double>(c) * z + static_cast<double>(d)); }
};

struct CosetKey {
    long c = 0, d = 1;
};

struct DoubleCosetKey {
    long c = 0, d_mod_c = 0;
};

// Bottom row (c, d), gcd 1, completed by extended gcd to a matrix of determinant 1.
GroupElement complete_matrix(long c, long d);

// Values A((k+i)/c), k mod c, one table per c, built by a single FFT of residue-class sums
// and memoized. Thread-safe.
class SymbolTable {
public:
    explicit SymbolTable(const CuspForm& f, long c_max = 10000, double tol = 1e-11);
    SymbolTable(const SymbolTable&) = delete;
    SymbolTable& operator=(const SymbolTable&) = delete;

    const CuspForm& form() const { return f_; }
    long c_max() const { return c_max_; }

    std::shared_ptr<const std::vector<cplx>> cusp_table(long c) const;
    // <gamma, f> = A((a+i)/c) - A((-d+i)/c); 0 for c = 0
    cplx symbol(const GroupElement& g) const;
    // same symbol via the direct period series, no tables
    cplx symbol_direct(const GroupElement& g) const;
    // build tables for several moduli in parallel
    void prefetch(const std::vector<long>& cs, int jobs = 0) const;
    std::size_t cached_tables() const;

private:
    std::vector<cplx> build(long c) const;

    const CuspForm& f_;
    long c_max_;
    double tol_;
    mutable std::mutex mu_;
    mutable std::map<long, std::shared_ptr<const std::vector<cplx>>> tables_;
};

// Direct evaluation of <gamma, f> at the base point (-d+i)/c.
cplx modular_symbol(const CuspForm& f, const GroupElement& g);
// A(gamma z) - A(z) at an arbitrary base point
cplx modular_symbol_at(const CuspForm& f, const GroupElement& g, cplx z);

// Cosets of Gamma_inf \ Gamma_0(N) with |cz+d|^2 <= Im(z) X: the identity, then c = N, 2N, ...
// in increasing c and d. fn(const GroupElement&, const CosetKey&).
long coset_c_limit(long N, cplx z, double X);

template <class F>
void coset_enum_block(long c, cplx z, double X, F&& fn) {
    const double x = std::real(z), y = std::imag(z);
    const double rhs = y * X - static_cast<double>(c) * c * y * y;
    if (rhs < 0) return;
    const double r = std::sqrt(rhs);
    const double centre = -static_cast<double>(c) * x;
    long lo = static_cast<long>(std::ceil(centre - r)) - 1, hi = static_cast<long>(std::floor(centre + r)) + 1;
    for (long d = lo; d <= hi; ++d) {
        if (std::gcd(c, d) != 1) continue;
        GroupElement g = complete_matrix(c, d);
        if (g.norm_at(z) > y * X) continue;
        fn(g, CosetKey{c, d});
    }
}

template <class F>
void coset_enum(long N, cplx z, double X, F&& fn) {
    if (std::imag(z) <= 0) throw std::invalid_argument("coset_enum: Im z must be positive");
    if (1.0 <= std::imag(z) * X) fn(GroupElement{}, CosetKey{0, 1});
    const long cl = coset_c_limit(N, z, X);
    for (long c = N; c <= cl; c += N) coset_enum_block(c, z, X, fn);
}

// Double cosets: c = N, 2N, ... <= c_max, d in [0, c) coprime, a = d^{-1} mod c.
template <class F>
void double_coset_block(long c, F&& fn) {
    for (long d = 0; d < c; ++d) {
        if (std::gcd(c, d) != 1) continue;
        long a = mod_inverse(d, c);
        long b = static_cast<long>((static_cast<__int128>(a) * d - 1) / c);
        fn(GroupElement{a, b, c, d}, DoubleCosetKey{c, d});
    }
}

template <class F>
void double_coset_enum(long N, double c_max, F&& fn) {
    for (long c = N; c <= c_max; c += N) double_coset_block(c, fn);
}

}  // namespace msym
