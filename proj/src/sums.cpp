#include "msym/sums.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "msym/dirichlet_l.hpp"
#include "msym/parallel.hpp"

namespace msym {

namespace {

const cplx I(0.0, 1.0);

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int mobius(long n) {
    int mu = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

void require_grid(const std::vector<double>& g) {
    if (g.empty()) throw std::invalid_argument("X grid is empty");
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > 0) || !std::isfinite(g[i])) throw std::invalid_argument("X grid must be positive and finite");
        if (i && !(g[i] > g[i - 1])) throw std::invalid_argument("X grid must be strictly increasing");
    }
}

// sum_{k >= 0} ((k + a)^2 + v^2)^{-s}, a > 20 v, via the binomial series in v^2/(k+a)^2
cplx h_tail(double a, double v, cplx s) {
    cplx acc = 0.0, binom = 1.0;
    const double v2 = v * v;
    double vp = 1.0;
    for (int j = 0; j < 40; ++j) {
        cplx t = binom * vp * hurwitz_zeta_shifted(2.0 * s + 2.0 * j, a).value;
        acc += t;
        if (j > 1 && std::abs(t) < 1e-18 * std::abs(acc)) break;
        binom *= (-s - static_cast<double>(j)) / static_cast<double>(j + 1);
        vp *= v2;
    }
    return acc;
}

// s = 2 in closed form: -(1/2v) d/dv [ (pi/v) sinh(2 pi v) / (cosh(2 pi v) - cos(2 pi u)) ]
double h_two(double u, double v) {
    const double q = std::exp(-2.0 * kPi * v);
    const double cs = std::cos(2.0 * kPi * u);
    const double D = 1.0 - 2.0 * q * cs + q * q;
    const double R = (1.0 - q * q) / D;
    const double Rp = 4.0 * kPi * q * (2.0 * q - cs * (1.0 + q * q)) / (D * D);
    return kPi * R / (2.0 * v * v * v) - kPi * Rp / (2.0 * v * v);
}

template <class Fn>
cplx sum_over_units(long c, const DirichletCharacter& chi, Fn&& fn) {
    CompensatedSum<cplx> acc;
    for (long r = 0; r < c; ++r) {
        if (std::gcd(c, r) != 1) continue;
        acc.add(chi(r) * fn(r));
    }
    return acc.value();
}

double tail_of(const std::vector<cplx>& blocks) {
    double t = 0;
    for (std::size_t i = blocks.size() / 2; i < blocks.size(); ++i) t += std::abs(blocks[i]);
    return t;
}

std::vector<long> moduli(long N, long c_max) {
    std::vector<long> cs;
    for (long c = N; c <= c_max; c += N) cs.push_back(c);
    return cs;
}

}  // namespace

void SumTrace::validate() const {
    require_grid(x_grid);
    if (values.size() != x_grid.size()) throw std::logic_error("SumTrace: size mismatch");
    for (auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::logic_error("SumTrace: non-finite value");
}

void SumTrace::write_csv(std::ostream& out) const {
    for (auto& [k, v] : meta) out << "# " << k << ": " << v << "\n";
    if (truncated) out << "# truncated: " << error << "\n";
    out << "X,re,im,abs\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        out << fmt(x_grid[i]) << "," << fmt(values[i].real()) << "," << fmt(values[i].imag()) << ","
            << fmt(std::abs(values[i])) << "\n";
}

SumTrace geometric_twisted_sum(const SymbolTable& tab, const DirichletCharacter& chi, cplx z,
                               const std::vector<double>& x_grid, int jobs) {
    require_grid(x_grid);
    const double y = std::imag(z);
    if (y <= 0) throw std::invalid_argument("geometric_twisted_sum: Im z must be positive");
    const long N = tab.form().level();
    if (chi.modulus() != N) throw std::invalid_argument("geometric_twisted_sum: character modulus != level");
    SumTrace tr;
    tr.meta = {{"ordering", "geometric"}, {"curve", tab.form().curve().label}, {"character", chi.label()},
               {"z", fmt(z.real()) + "+" + fmt(z.imag()) + "i"}};
    tr.x_grid = x_grid;
    while (!tr.x_grid.empty() && coset_c_limit(N, z, tr.x_grid.back()) > tab.c_max()) tr.x_grid.pop_back();
    if (tr.x_grid.size() != x_grid.size()) {
        tr.truncated = true;
        tr.error = "grid beyond c policy limit " + std::to_string(tab.c_max()) + " dropped";
    }
    if (tr.x_grid.empty()) return tr;
    const double X = tr.x_grid.back();
    auto cs = moduli(N, coset_c_limit(N, z, X));
    tab.prefetch(cs, jobs);

    // (norm, c, d, term), gathered per block then merged in a fixed order
    using Term = std::tuple<double, long, long, cplx>;
    std::vector<std::vector<Term>> blocks(cs.size());
    parallel_for(static_cast<long>(cs.size()), jobs, [&](long i) {
        coset_enum_block(cs[i], z, X, [&](const GroupElement& g, const CosetKey& k) {
            blocks[i].emplace_back(g.norm_at(z), k.c, k.d, chi(k.d) * tab.symbol(g));
        });
    });
    std::vector<Term> all;
    for (auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end(), [](const Term& p, const Term& q) {
        return std::tie(std::get<0>(p), std::get<1>(p), std::get<2>(p)) <
               std::tie(std::get<0>(q), std::get<1>(q), std::get<2>(q));
    });
    CompensatedSum<cplx> acc;  // identity coset contributes 0
    std::size_t j = 0;
    for (double Xg : tr.x_grid) {
        while (j < all.size() && std::get<0>(all[j]) <= y * Xg) acc.add(std::get<3>(all[j++]));
        tr.values.push_back(acc.value());
    }
    return tr;
}

SumTrace arithmetic_twisted_sum(const SymbolTable& tab, const DirichletCharacter& chi,
                                const std::vector<double>& x_grid, int jobs) {
    require_grid(x_grid);
    const long N = tab.form().level();
    if (chi.modulus() != N) throw std::invalid_argument("arithmetic_twisted_sum: character modulus != level");
    for (double X : x_grid) {
        double r = std::sqrt(X);
        long k = std::lround(r / N);
        if (k > 0 && static_cast<double>(k * N) * static_cast<double>(k * N) == X)
            throw std::invalid_argument("arithmetic_twisted_sum: X^{1/2} is a multiple of the level at X = " + fmt(X));
    }
    SumTrace tr;
    tr.meta = {{"ordering", "arithmetic"}, {"curve", tab.form().curve().label}, {"character", chi.label()}};
    tr.x_grid = x_grid;
    auto climit = [](double X) {
        long c = static_cast<long>(std::floor(std::sqrt(X)));
        while (static_cast<double>(c) * c >= X) --c;
        return c;
    };
    while (!tr.x_grid.empty() && climit(tr.x_grid.back()) > tab.c_max()) tr.x_grid.pop_back();
    if (tr.x_grid.size() != x_grid.size()) {
        tr.truncated = true;
        tr.error = "grid beyond c policy limit " + std::to_string(tab.c_max()) + " dropped";
    }
    if (tr.x_grid.empty()) return tr;
    auto cs = moduli(N, climit(tr.x_grid.back()));
    std::vector<cplx> block(cs.size());
    parallel_for(static_cast<long>(cs.size()), jobs, [&](long i) {
        CompensatedSum<cplx> acc;
        double_coset_block(cs[i], [&](const GroupElement& g, const DoubleCosetKey& k) {
            acc.add(chi(k.d_mod_c) * tab.symbol(g));
        });
        block[i] = acc.value();
    });
    CompensatedSum<cplx> acc;
    std::size_t j = 0;
    for (double Xg : tr.x_grid) {
        while (j < cs.size() && static_cast<double>(cs[j]) * cs[j] < Xg) acc.add(block[j++]);
        tr.values.push_back(acc.value());
    }
    return tr;
}

KloostermanPartial kloosterman_star_partial(const SymbolTable& tab, const DirichletCharacter& chi, long n, cplx s,
                                            long c_max, int jobs) {
    if (std::real(s) < 1.5) throw std::invalid_argument("kloosterman_star_partial: Re s < 1.5 is not convergent");
    const long N = tab.form().level();
    KloostermanPartial kp;
    kp.n = n;
    kp.s = s;
    if (n == 0)
        kp.prefactor = std::sqrt(kPi) * std::exp(lgamma_complex(s - 0.5) - lgamma_complex(s));
    else
        kp.prefactor = std::exp(s * std::log(kPi) + (s - 1.0) * std::log(static_cast<double>(std::labs(n))) -
                                lgamma_complex(s));
    kp.c = moduli(N, c_max);
    tab.prefetch(kp.c, jobs);
    kp.block.resize(kp.c.size());
    parallel_for(static_cast<long>(kp.c.size()), jobs, [&](long i) {
        const long c = kp.c[i];
        CompensatedSum<cplx> acc;
        double_coset_block(c, [&](const GroupElement& g, const DoubleCosetKey& k) {
            cplx e = n == 0 ? cplx(1.0) : std::polar(1.0, 2.0 * kPi * static_cast<double>(positive_mod(n * g.a, c)) / c);
            acc.add(chi(k.d_mod_c) * e * tab.symbol(g));
        });
        kp.block[i] = acc.value() * std::exp(-2.0 * s * std::log(static_cast<double>(c)));
    });
    CompensatedSum<cplx> run;
    for (auto& b : kp.block) {
        run.add(b);
        kp.partial.push_back(run.value());
    }
    return kp;
}

cplx lattice_h(double u, double v, cplx s) {
    if (!(v > 0)) throw std::invalid_argument("lattice_h: v must be positive");
    u -= std::floor(u);
    if (s == cplx(2.0, 0.0)) return h_two(u, v);
    if (v >= 0.5) {
        // Fourier expansion in u
        cplx acc = std::sqrt(kPi) * std::exp(lgamma_complex(s - 0.5) - lgamma_complex(s) + (1.0 - 2.0 * s) * std::log(v));
        const cplx pref = 2.0 * std::exp(s * std::log(kPi) - lgamma_complex(s));
        for (long m = 1;; ++m) {
            if (2.0 * kPi * m * v > 45.0 + std::abs(s)) break;
            cplx t = pref * std::exp((s - 0.5) * std::log(static_cast<double>(m) / v)) *
                     bessel_k(s - 0.5, 2.0 * kPi * m * v) * (2.0 * std::cos(2.0 * kPi * m * u));
            acc += t;
        }
        return acc;
    }
    const long K = 20;
    CompensatedSum<cplx> acc;
    for (long k = -K; k <= K; ++k) acc.add(std::exp(-s * std::log((u + k) * (u + k) + v * v)));
    acc.add(h_tail(K + 1 + u, v, s));
    acc.add(h_tail(K + 1 - u, v, s));
    return acc.value();
}

BruteValue eisenstein_brute(long N, const DirichletCharacter& chi, cplx z, cplx s, EisensteinMode mode, Cusp cusp,
                            long c_max) {
    if (std::real(s) < 1.5) throw std::invalid_argument("eisenstein_brute: Re s < 1.5 is not convergent");
    if (chi.modulus() != N) throw std::invalid_argument("eisenstein_brute: character modulus != level");
    const double x = std::real(z), y = std::imag(z);
    if (y <= 0) throw std::invalid_argument("eisenstein_brute: Im z must be positive");
    std::vector<cplx> blocks;
    cplx total;
    if (cusp == Cusp::infinity) {
        for (long c = N; c <= c_max; c += N) {
            cplx b = sum_over_units(c, chi, [&](long r) { return lattice_h(x + static_cast<double>(r) / c, y, s); });
            blocks.push_back(b * std::exp(-2.0 * s * std::log(static_cast<double>(c))));
        }
        CompensatedSum<cplx> acc;
        acc.add(1.0);
        for (auto& b : blocks) acc.add(b);
        total = acc.value() * std::exp(s * std::log(y));
    } else {
        // E(-1/(Nz)): bottom rows (dN, -c) with c = N c'; periodized over c' mod d by Moebius inversion
        for (long d = 1; d <= c_max; ++d) {
            if (d % N == 0) {
                blocks.push_back(0.0);
                continue;
            }
            CompensatedSum<cplx> g;
            for (long e = 1; e <= d; ++e) {
                if (d % e) continue;
                int mu = mobius(d / e);
                if (mu == 0) continue;
                g.add(static_cast<double>(mu) * std::exp(2.0 * s * std::log(static_cast<double>(e))) *
                      lattice_h(e * x, e * y, s));
            }
            blocks.push_back(chi(d) * std::exp(-2.0 * s * std::log(static_cast<double>(d))) * g.value());
        }
        CompensatedSum<cplx> acc;
        for (auto& b : blocks) acc.add(b);
        total = acc.value() * std::exp(s * std::log(y / static_cast<double>(N)));
    }
    BruteValue out;
    cplx scale = std::exp(s * std::log(y));
    out.tail_estimate = tail_of(blocks) * std::abs(scale);
    if (mode == EisensteinMode::completed) {
        cplx L = l_value(chi, 2.0 * s);
        total *= L;
        out.tail_estimate *= std::abs(L);
    }
    out.value = total;
    return out;
}

BruteValue estar_brute(const SymbolTable& tab, const DirichletCharacter& chi, cplx z, cplx s, long c_max, int jobs) {
    if (std::real(s) < 1.6) throw std::invalid_argument("estar_brute: Re s < 1.6 is outside the supported region");
    const long N = tab.form().level();
    const double x = std::real(z), y = std::imag(z);
    if (y <= 0) throw std::invalid_argument("estar_brute: Im z must be positive");
    auto cs = moduli(N, c_max);
    tab.prefetch(cs, jobs);
    std::vector<cplx> blocks(cs.size());
    parallel_for(static_cast<long>(cs.size()), jobs, [&](long i) {
        const long c = cs[i];
        auto t = tab.cusp_table(c);
        cplx b = sum_over_units(c, chi, [&](long r) {
            cplx sym = (*t)[mod_inverse(r, c)] - (*t)[positive_mod(-r, c)];
            return sym * lattice_h(x + static_cast<double>(r) / c, y, s);
        });
        blocks[i] = b * std::exp(-2.0 * s * std::log(static_cast<double>(c)));
    });
    CompensatedSum<cplx> acc;
    for (auto& b : blocks) acc.add(b);
    cplx scale = std::exp(s * std::log(y));
    return {acc.value() * scale, tail_of(blocks) * std::abs(scale)};
}

std::vector<cplx> horocycle_samples(const std::function<cplx(cplx)>& g, double y, int nodes, int jobs) {
    if (nodes < 2) throw std::invalid_argument("horocycle_samples: need at least two nodes");
    std::vector<cplx> out(static_cast<std::size_t>(nodes));
    parallel_for(nodes, jobs, [&](long j) { out[j] = g(cplx(static_cast<double>(j) / nodes, y)); });
    return out;
}

cplx fourier_coefficient(const std::vector<cplx>& samples, long n) {
    const long M = static_cast<long>(samples.size());
    CompensatedSum<cplx> acc;
    for (long j = 0; j < M; ++j)
        acc.add(samples[j] * std::polar(1.0, -2.0 * kPi * static_cast<double>(positive_mod(n * j, M)) / M));
    return acc.value() / static_cast<double>(M);
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (count < 2 || !(lo > 0) || !(hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi and count >= 2");
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    g.back() = hi;
    return g;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("loglog_slope: size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0) || !(x[i] > 0)) continue;
        double u = std::log(x[i]), v = std::log(y[i]);
        sx += u, sy += v, sxx += u * u, sxy += u * v;
        ++m;
    }
    if (m < 2) throw std::invalid_argument("loglog_slope: fewer than two usable points");
    double den = m * sxx - sx * sx;
    if (den <= 0) throw std::invalid_argument("loglog_slope: degenerate x values");
    return (m * sxy - sx * sy) / den;
}

std::vector<double> running_max_envelope(const std::vector<cplx>& values) {
    std::vector<double> out;
    double m = 0;
    for (auto& v : values) out.push_back(m = std::max(m, std::abs(v)));
    return out;
}

}  // namespace msym
