#include "msym/modsym.hpp"

#include <fftw3.h>

#include <string>

#include "msym/parallel.hpp"

namespace msym {

namespace {

std::mutex g_fftw_mu;  // planner is not thread-safe

}  // namespace

GroupElement complete_matrix(long c, long d) {
    if (c == 0) {
        if (d != 1 && d != -1) throw std::invalid_argument("complete_matrix: (0, d) needs d = +-1");
        return {d, 0, 0, d};
    }
    if (std::gcd(c, d) != 1) throw std::invalid_argument("complete_matrix: gcd(c, d) != 1");
    const long m = c > 0 ? c : -c;
    long a = m == 1 ? 0 : mod_inverse(d, m);
    __int128 num = static_cast<__int128>(a) * d - 1;
    return {a, static_cast<long>(num / c), c, d};
}

SymbolTable::SymbolTable(const CuspForm& f, long c_max, double tol) : f_(f), c_max_(c_max), tol_(tol) {
    if (c_max <= 0 || !(tol > 0)) throw std::invalid_argument("SymbolTable: bad policy");
}

std::vector<cplx> SymbolTable::build(long c) const {
    const long M = CuspForm::period_terms(1.0 / static_cast<double>(c), tol_);
    auto a = f_.coeffs(M);
    // B_r = sum_{n = r mod c} (a_n/n) e^{-2 pi n/c}
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(c));
    std::vector<CompensatedSum<cplx>> B(static_cast<std::size_t>(c));
    const double decay = std::exp(-2.0 * kPi / static_cast<double>(c));
    double w = 1.0;
    for (long n = 1; n <= M; ++n) {
        w *= decay;
        if (n % 256 == 0) w = std::exp(-2.0 * kPi * static_cast<double>(n) / static_cast<double>(c));
        if (a[n] != 0) B[n % c].add(static_cast<double>(a[n]) / static_cast<double>(n) * w);
    }
    for (long r = 0; r < c; ++r) {
        cplx v = B[r].value();
        buf[r][0] = v.real();
        buf[r][1] = v.imag();
    }
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lk(g_fftw_mu);
        plan = fftw_plan_dft_1d(static_cast<int>(c), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::vector<cplx> out(static_cast<std::size_t>(c));
    for (long k = 0; k < c; ++k) out[k] = cplx(buf[k][0], buf[k][1]);
    {
        std::lock_guard<std::mutex> lk(g_fftw_mu);
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    return out;
}

std::shared_ptr<const std::vector<cplx>> SymbolTable::cusp_table(long c) const {
    if (c <= 0) throw std::invalid_argument("cusp_table: c must be positive");
    if (c > c_max_)
        throw std::invalid_argument("modular symbol: c = " + std::to_string(c) + " exceeds the policy limit " +
                                    std::to_string(c_max_));
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = tables_.find(c);
        if (it != tables_.end()) return it->second;
    }
    auto t = std::make_shared<const std::vector<cplx>>(build(c));
    std::lock_guard<std::mutex> lk(mu_);
    // values are deterministic, so whichever insert wins is fine
    return tables_.emplace(c, t).first->second;
}

cplx SymbolTable::symbol(const GroupElement& g) const {
    if (g.c == 0) return 0.0;
    if (g.c < 0) return symbol(-g);
    auto t = cusp_table(g.c);
    return (*t)[positive_mod(g.a, g.c)] - (*t)[positive_mod(-g.d, g.c)];
}

cplx SymbolTable::symbol_direct(const GroupElement& g) const { return modular_symbol(f_, g); }

void SymbolTable::prefetch(const std::vector<long>& cs, int jobs) const {
    parallel_for(static_cast<long>(cs.size()), jobs, [&](long i) { cusp_table(cs[i]); });
}

std::size_t SymbolTable::cached_tables() const {
    std::lock_guard<std::mutex> lk(mu_);
    return tables_.size();
}

cplx modular_symbol(const CuspForm& f, const GroupElement& g) {
    if (g.c == 0) return 0.0;
    if (g.c < 0) return modular_symbol(f, -g);
    const double c = static_cast<double>(g.c);
    return f.period_A(cplx(static_cast<double>(g.a), 1.0) / c) - f.period_A(cplx(static_cast<double>(-g.d), 1.0) / c);
}

cplx modular_symbol_at(const CuspForm& f, const GroupElement& g, cplx z) {
    return f.period_A(g.act(z)) - f.period_A(z);
}

long coset_c_limit(long N, cplx z, double X) {
    // |cz+d|^2 >= c^2 y^2
    const double y = std::imag(z);
    long cl = static_cast<long>(std::floor(std::sqrt(X / y)));
    return cl - cl % N;
}

}  // namespace msym
