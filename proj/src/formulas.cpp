#include "msym/formulas.hpp"

#include <cmath>
#include <stdexcept>

namespace msym {

namespace {

const cplx I(0.0, 1.0);

cplx cpow(double base, cplx e) { return std::exp(e * std::log(base)); }

void require_even_primitive(const DirichletCharacter& chi, const char* who) {
    if (chi.is_trivial() || !chi.is_even())
        throw std::invalid_argument(std::string(who) + ": needs an even nontrivial character");
}

void require_pair(const CuspForm& f, const ZeroCache& zc, const ZeroCache& zcb, double T, const char* who) {
    require_even_primitive(zc.chi, who);
    if (!(zcb.chi == zc.chi.conj())) throw std::invalid_argument(std::string(who) + ": second cache must be for chibar");
    if (zc.chi.modulus() != f.level()) throw std::invalid_argument(std::string(who) + ": character modulus != level");
    if (zc.T < T || zcb.T < T) throw std::invalid_argument(std::string(who) + ": zero cache below requested height");
}

cplx l_checked(const DirichletCharacter& chi, cplx s, const char* who) {
    cplx v = l_value(chi, s);
    if (std::abs(v) < 1e-13) throw PoleError(std::string(who) + ": L(2s, chi) vanishes at the requested s", 0);
    return v;
}

// 1 / (Gamma(1-w) L(2-2w, chi)) via the functional equation, finite where Gamma(1-w) has poles
cplx inv_gamma_l_reflected(const DirichletCharacter& chi, cplx w) {
    const double N = static_cast<double>(chi.modulus());
    // L(2w-1, chibar) = tau(chibar)/sqrt N (N/pi)^{3/2-2w} Gamma(1-w)/Gamma(w-1/2) L(2-2w, chi)
    cplx num = gauss_sum(chi.conj()) / std::sqrt(N) * cpow(N / kPi, 1.5 - 2.0 * w);
    cplx den = gamma_complex(w - 0.5) * l_value(chi.conj(), 2.0 * w - 1.0);
    return num / den;
}

}  // namespace

void TruncationSpec::validate() const {
    if (!(T >= 0) || T > 120) throw std::invalid_argument("truncation: T must lie in [0, 120]");
    if (n_max < 1) throw std::invalid_argument("truncation: n_max must be positive");
    if (k_max < 3) throw std::invalid_argument("truncation: k_max must be at least 3");
    if (trivial_zero_floor > 0 || trivial_zero_floor < -20)
        throw std::invalid_argument("truncation: trivial_zero_floor must lie in [-20, 0]");
}

cplx lemma22_fourier(const DirichletCharacter& chi, cplx w, long n, double y, Cusp cusp, Lemma22Variant variant) {
    require_even_primitive(chi, "lemma22_fourier");
    if (!(y > 0)) throw std::invalid_argument("lemma22_fourier: y must be positive");
    const double N = static_cast<double>(chi.modulus());
    const double an = static_cast<double>(std::labs(n));
    if (cusp == Cusp::infinity) {
        if (n == 0) return 2.0 * cpow(y, w) * l_value(chi, 2.0 * w);
        return 4.0 * gauss_sum(chi) * cpow(kPi, w) * cpow(N, -2.0 * w) * rgamma_complex(w) * cpow(an, 0.5 - w) *
               twisted_divisor_sum(2.0 * w - 1.0, n, chi.conj()) * std::sqrt(y) * bessel_k(w - 0.5, 2.0 * kPi * an * y);
    }
    if (n == 0) {
        long k;
        if (is_nonpositive_integer(w - 0.5, &k))
            throw PoleError("lemma22_fourier: Gamma(w - 1/2) pole at w = 1/2 - " + std::to_string(k), k);
        // 2 tau(chi) pi^{2w-1} Gamma(1-w) N^{1-3w} / Gamma(w) L(2-2w, chibar), rewritten by the
        // functional equation so that the Gamma(1-w) poles against trivial zeros are resolved
        cplx v = 2.0 * std::sqrt(kPi) * cpow(N, -w) * std::exp(lgamma_complex(w - 0.5)) * rgamma_complex(w) *
                 l_value(chi, 2.0 * w - 1.0) * cpow(y, 1.0 - w);
        if (variant == Lemma22Variant::printed) v *= cpow(N, 6.0 * w - 2.0);
        return v;
    }
    return 4.0 * cpow(kPi, w) * cpow(N, -w) * rgamma_complex(w) * cpow(an, w - 0.5) *
           twisted_divisor_sum(1.0 - 2.0 * w, n, chi) * std::sqrt(y) * bessel_k(w - 0.5, 2.0 * kPi * an * y);
}

cplx central_value(const CuspForm& f, const DirichletCharacter& chi) {
    return f.lf_twisted(chi, 1.0, TwistMode::central);
}

cplx cor14_phi_star_zero(const CuspForm& f, const DirichletCharacter& chi, cplx s) {
    require_even_primitive(chi, "cor14_phi_star_zero");
    const DirichletCharacter cb = chi.conj();
    const double N = static_cast<double>(f.level());
    cplx L1 = l_checked(chi, 2.0 * s, "cor14_phi_star_zero"), L2 = l_checked(cb, 2.0 * s, "cor14_phi_star_zero");
    cplx bracket = gauss_sum(cb) * central_value(f, chi) / L1 - gauss_sum(chi) * central_value(f, cb) / L2;
    return 2.0 * cpow(N, -2.0 * s) * f.lf_value(2.0 * s).value * bracket;
}

cplx thm12_constant_term(const CuspForm& f, const DirichletCharacter& chi, cplx s, double y) {
    if (!(y > 0)) throw std::invalid_argument("thm12_constant_term: y must be positive");
    long k;
    if (is_nonpositive_integer(s - 0.5, &k)) throw PoleError("thm12_constant_term: Gamma(s - 1/2) pole", k);
    cplx pref = std::sqrt(kPi) * std::exp(lgamma_complex(s - 0.5)) * rgamma_complex(s);
    return pref * cor14_phi_star_zero(f, chi, s) * cpow(y, 1.0 - s);
}

cplx phi_star_zero_derived(const CuspForm& f, const DirichletCharacter& chi, cplx s) {
    require_even_primitive(chi, "phi_star_zero_derived");
    const DirichletCharacter cb = chi.conj();
    const double N = static_cast<double>(f.level());
    cplx den = l_checked(chi, 2.0 * s, "phi_star_zero_derived") * l_checked(cb, 2.0 * s, "phi_star_zero_derived");
    return gauss_sum(cb) * cpow(N, -2.0 * s) * f.lf_value(2.0 * s).value * central_value(f, chi) / den;
}

const LineValue& LineBreakdown::line(const std::string& name) const {
    for (auto& l : lines)
        if (l.name == name) return l;
    throw std::out_of_range("LineBreakdown: no line " + name);
}

nlohmann::json LineBreakdown::to_json() const {
    nlohmann::json j;
    j["total"] = {total.real(), total.imag()};
    for (auto& l : lines)
        j["lines"].push_back({{"name", l.name},
                              {"value", {l.value.real(), l.value.imag()}},
                              {"available", l.available},
                              {"last_term", l.last_term},
                              {"note", l.note}});
    return j;
}

LineBreakdown thm13_nonmaass(const CuspForm& f, const ZeroCache& zc, const ZeroCache& zcb, cplx s, long n, double y,
                             const TruncationSpec& trunc, KSumVariant variant) {
    trunc.validate();
    require_pair(f, zc, zcb, trunc.T, "thm13_nonmaass");
    if (n == 0) throw std::invalid_argument("thm13_nonmaass: n must be nonzero");
    if (!(y > 0)) throw std::invalid_argument("thm13_nonmaass: y must be positive");
    long k;
    if (is_nonpositive_integer(s, &k)) throw PoleError("thm13_nonmaass: Gamma(s) pole", k);
    const DirichletCharacter& chi = zc.chi;
    const DirichletCharacter cb = chi.conj();
    const double N = static_cast<double>(f.level());
    const double an = static_cast<double>(std::labs(n));
    const cplx rgs = rgamma_complex(s);
    const cplx tau = gauss_sum(chi);
    LineBreakdown out;

    {
        out.lines.push_back({"maass", 0.0, false, 0.0, "spectral line over Maass forms is not evaluated"});
    }
    {
        // shifted convolution
        LineValue lv{"shifted_convolution", 0.0, true, 0.0, ""};
        const cplx pref = 4.0 * cpow(kPi, s) * tau * cpow(N, -2.0 * s) * rgs * std::sqrt(y);
        const long m_max = static_cast<long>(std::ceil((std::log(1e12) + 5.0) / (2.0 * kPi * y))) + 1;
        CompensatedSum<cplx> acc;
        for (long m = 1; m <= m_max; ++m) {
            if (m == n) continue;
            const long d = n - m;
            const double ad = static_cast<double>(std::labs(d));
            cplx t = static_cast<double>(f.coeff(m)) / m * std::exp(-2.0 * kPi * m * y) * pref * cpow(ad, 0.5 - s) *
                     twisted_divisor_sum(2.0 * s - 1.0, d, cb) * bessel_k(s - 0.5, 2.0 * kPi * ad * y);
            acc.add(-t);
            lv.last_term = std::abs(t);
        }
        lv.value = acc.value();
        lv.note = "m = n excluded";
        out.lines.push_back(lv);
    }
    const cplx big = cpow(2.0, 2.0 * s + 1.0) * cpow(kPi, 2.0 - s) / N * rgs;
    const cplx L2s = l_checked(chi, 2.0 * s, "thm13_nonmaass"), L2sb = l_checked(cb, 2.0 * s, "thm13_nonmaass");
    {
        LineValue lv{"k_sum", 0.0, true, 0.0, ""};
        CompensatedSum<cplx> acc;
        for (long kk = 0; kk <= trunc.k_max; ++kk) {
            // L_f(1-k, .) vanishes for k >= 1 (Gamma poles of the completed twist)
            cplx lf_chi = kk == 0 ? central_value(f, chi) : cplx(0.0);
            cplx lf_cb = kk == 0 ? central_value(f, cb) : cplx(0.0);
            cplx lfk = variant == KSumVariant::printed ? f.lf_value(static_cast<double>(kk)).value
                                                        : f.lf_value(2.0 * s + static_cast<double>(kk)).value;
            cplx wk = s + static_cast<double>(kk);
            cplx g = std::exp(lgamma_complex(2.0 * s + static_cast<double>(kk) - 1.0) - lgamma_complex(kk + 1.0)) *
                     rgamma_complex(wk);
            cplx term_chi = lf_chi / L2s * inv_gamma_l_reflected(chi, wk) *
                            twisted_divisor_sum(1.0 - 2.0 * wk, n, cb);
            cplx term_cb = lf_cb / L2sb * inv_gamma_l_reflected(cb, wk) * twisted_divisor_sum(1.0 - 2.0 * wk, n, chi);
            cplx t = big * g * lfk * (term_chi - term_cb) * cpow(an, wk - 0.5) * std::sqrt(y) *
                     bessel_k(0.5 - wk, 2.0 * kPi * an * y);
            acc.add(t);
            lv.last_term = std::abs(t);
        }
        lv.value = acc.value();
        lv.note = variant == KSumVariant::printed ? "L_f(k) as printed" : "L_f(2s+k)";
        out.lines.push_back(lv);
    }
    auto rho_line = [&](const ZeroCache& z, const DirichletCharacter& c, cplx L2, double sign, const char* name) {
        LineValue lv{name, 0.0, true, 0.0, ""};
        CompensatedSum<cplx> acc;
        for (auto& zero : z.zeros) {
            if (std::abs(zero.rho.imag()) > trunc.T) continue;
            cplx r = zero.rho / 2.0;
            cplx arg = s + r;
            if (std::real(arg) < 1.75) {
                lv.available = false;
                lv.note = "twisted L_f outside Re >= 1.75";
                break;
            }
            cplx g = std::exp(lgamma_complex(s + r - 1.0) + lgamma_complex(s - r) - lgamma_complex(1.0 - r) -
                              lgamma_complex(r));
            cplx t = sign * big * g * f.lf_value(s + 1.0 - r).value * f.lf_twisted(c, arg, TwistMode::series) / L2 /
                     (2.0 * zero.l_prime) * twisted_divisor_sum(2.0 * r - 1.0, n, c.conj()) *
                     cpow(an, 0.5 - r) * std::sqrt(y) * bessel_k(r - 0.5, 2.0 * kPi * an * y);
            acc.add(t);
            lv.last_term = std::abs(t);
        }
        lv.value = lv.available ? acc.value() : cplx(0.0);
        out.lines.push_back(lv);
    };
    rho_line(zc, chi, L2s, 1.0, "rho_sum_chi");
    rho_line(zcb, cb, L2sb, -1.0, "rho_sum_chibar");
    CompensatedSum<cplx> tot;
    for (auto& l : out.lines)
        if (l.available) tot.add(l.value);
    out.total = tot.value();
    return out;
}

Thm11MainTerm::Thm11MainTerm(const CuspForm& f, const ZeroCache& zc, const ZeroCache& zcb, cplx z, MainTermMode mode,
                             const TruncationSpec& trunc) {
    trunc.validate();
    require_pair(f, zc, zcb, trunc.T, "thm11_main_term");
    const double x = std::real(z), y = std::imag(z);
    if (!(y > 0)) throw std::invalid_argument("thm11_main_term: Im z must be positive");
    const double N = static_cast<double>(f.level());
    const DirichletCharacter& chi = zc.chi;
    const DirichletCharacter cb = chi.conj();
    auto mode_sum = [&](auto&& coefficient) {
        CompensatedSum<cplx> acc;
        for (long n = -trunc.n_max; n <= trunc.n_max; ++n) {
            if (n == 0) continue;
            acc.add(coefficient(n) * std::polar(1.0, 2.0 * kPi * n * x));
        }
        return acc.value();
    };
    if (mode == MainTermMode::literal) {
        const cplx lf0 = f.lf_value(0.0).value;
        // first sum runs over zeros of L(., chibar), second over zeros of L(., chi)
        auto add = [&](const ZeroCache& zs, const DirichletCharacter& c, double sign) {
            const DirichletCharacter other = c.conj();
            const cplx lf1 = central_value(f, c);
            for (auto& zero : zs.zeros) {
                if (std::abs(zero.rho.imag()) > trunc.T) continue;
                const cplx rho = zero.rho;
                cplx g = cpow(4.0 * kPi, 1.0 - rho / 2.0) / N * gamma_complex(1.0 - rho) *
                         std::pow(rgamma_complex(1.0 - rho / 2.0), 2) * rgamma_complex(rho / 2.0);
                cplx c0 = g * lf0 * lf1 / l_value(c, 1.0 - rho) / zero.l_prime;
                cplx modes = mode_sum([&](long n) {
                    double a = static_cast<double>(std::labs(n));
                    return twisted_divisor_sum(rho, n, other) * cpow(a, (1.0 - rho) / 2.0) * std::sqrt(y) *
                           bessel_k(0.5 + rho, 2.0 * kPi * a * y);
                });
                coef_.push_back({sign * c0 * modes, 1.0 - rho / 2.0});
                last_term_ = std::max(last_term_, std::abs(c0 * modes));
            }
        };
        add(zcb, cb, 1.0);
        add(zc, chi, -1.0);
        return;
    }
    // residue at s = 1 - rho/2 of the rho-line of the Fourier coefficients, times X^s / s
    auto add = [&](const ZeroCache& zs, const DirichletCharacter& c, double sign) {
        const cplx lf1 = central_value(f, c);
        for (auto& zero : zs.zeros) {
            if (std::abs(zero.rho.imag()) > trunc.T) continue;
            const cplx r = zero.rho / 2.0;
            const cplx s = 1.0 - r;
            cplx big = cpow(2.0, 2.0 * s + 1.0) * cpow(kPi, 2.0 - s) / N * rgamma_complex(s);
            cplx g = std::exp(lgamma_complex(1.0 - 2.0 * r) - lgamma_complex(1.0 - r) - lgamma_complex(r));
            cplx c0 = big * g * f.lf_value(2.0 - 2.0 * r).value * lf1 / l_value(c, 2.0 - 2.0 * r) /
                      (2.0 * zero.l_prime);
            cplx modes = mode_sum([&](long n) {
                double a = static_cast<double>(std::labs(n));
                return twisted_divisor_sum(2.0 * r - 1.0, n, c.conj()) * cpow(a, 0.5 - r) * std::sqrt(y) *
                       bessel_k(r - 0.5, 2.0 * kPi * a * y);
            });
            coef_.push_back({sign * c0 * modes / s, s});
            last_term_ = std::max(last_term_, std::abs(c0 * modes / s));
        }
    };
    add(zc, chi, 1.0);
    add(zcb, cb, -1.0);
}

cplx Thm11MainTerm::operator()(double X) const {
    if (!(X > 0)) throw std::invalid_argument("thm11_main_term: X must be positive");
    CompensatedSum<cplx> acc;
    for (auto& t : coef_) acc.add(t.coef * cpow(X, t.exponent));
    return acc.value();
}

cplx thm11_main_term(const CuspForm& f, const ZeroCache& zc, const ZeroCache& zcb, cplx z, double X,
                     MainTermMode mode, const TruncationSpec& trunc) {
    return Thm11MainTerm(f, zc, zcb, z, mode, trunc)(X);
}

Thm15Rhs::Thm15Rhs(const CuspForm& f, const ZeroCache& zc, const ZeroCache& zcb, const TruncationSpec& trunc,
                   Thm15Variant variant) {
    trunc.validate();
    require_pair(f, zc, zcb, trunc.T, "thm15_rhs");
    const double N = static_cast<double>(f.level());
    const DirichletCharacter& chi = zc.chi;
    const DirichletCharacter cb = chi.conj();
    const cplx K = gauss_sum(cb) * central_value(f, chi);
    const cplx Kb = gauss_sum(chi) * central_value(f, cb);
    auto trivial_of = [&](const ZeroCache& zs) {
        std::vector<LZero> out;
        for (auto& t : zs.trivial)
            if (t.rho.real() >= static_cast<double>(trunc.trivial_zero_floor) - 1e-9) out.push_back(t);
        return out;
    };
    if (variant == Thm15Variant::printed) {
        auto add = [&](const ZeroCache& zs, cplx Kc, double sign) {
            auto use = [&](const LZero& zero, bool trivial) {
                const cplx rho = zero.rho;
                cplx c = sign * 8.0 * kPi * I * cpow(N, rho) / rho * Kc * f.lf_value(rho).value / (2.0 * zero.l_prime);
                terms_.push_back({rho, c, 0.0, trivial});
            };
            for (auto& zero : zs.zeros)
                if (std::abs(zero.rho.imag()) <= trunc.T) use(zero, false);
            for (auto& zero : trivial_of(zs))
                if (std::abs(zero.rho) > 1e-12) use(zero, true);
        };
        add(zc, K, 1.0);
        add(zcb, Kb, -1.0);
        const cplx lfp0 = f.lf_value(0.0, true).derivative;
        constant_ = 4.0 * kPi * I * (K * lfp0 / l_derivative(chi, 0.0) - Kb * lfp0 / l_derivative(cb, 0.0));
        return;
    }
    // Perron over the closed form G(u) = K N^{-u} L_f(u) / (L(u,chi) L(u,chibar)) of sum_c block_c c^{-u};
    // the residue of G(u) Y^u / u at a pole of order <= 2 is Y^p (a_{-1} + a_{-2} log Y)
    auto G = [&](cplx u) { return K * cpow(N, -u) * f.lf_value(u).value / (l_value(chi, u) * l_value(cb, u)) / u; };
    auto laurent = [&](cplx p, double r, bool trivial) {
        cplx a1 = cauchy_residue(G, p, r, 48);
        cplx a2 = cauchy_residue([&](cplx u) { return G(u) * (u - p); }, p, r, 48);
        terms_.push_back({p, a1, a2, trivial});
    };
    if (chi.is_real()) {
        for (auto& zero : zc.zeros)
            if (std::abs(zero.rho.imag()) <= trunc.T) laurent(zero.rho, 0.02, false);
    } else {
        auto add = [&](const ZeroCache& zs, const DirichletCharacter& other) {
            for (auto& zero : zs.zeros) {
                if (std::abs(zero.rho.imag()) > trunc.T) continue;
                const cplx rho = zero.rho;
                cplx c = K * cpow(N, -rho) * f.lf_value(rho).value / (zero.l_prime * l_value(other, rho)) / rho;
                terms_.push_back({rho, c, 0.0, false});
            }
        };
        add(zc, cb);
        add(zcb, chi);
    }
    for (long k = 0; k >= trunc.trivial_zero_floor; k -= 2) laurent(static_cast<double>(k), 0.25, true);
    constant_ = 0.0;
}

std::vector<std::pair<cplx, cplx>> Thm15Rhs::zero_terms(double X) const {
    std::vector<std::pair<cplx, cplx>> out;
    const double lY = 0.5 * std::log(X);
    for (auto& t : terms_) out.emplace_back(t.rho, std::exp(t.rho * lY) * (t.coef + t.log_coef * lY));
    return out;
}

cplx Thm15Rhs::operator()(double X) const {
    if (!(X > 0)) throw std::invalid_argument("thm15_rhs: X must be positive");
    CompensatedSum<cplx> acc;
    acc.add(constant_);
    for (auto& [rho, v] : zero_terms(X)) acc.add(v);
    return acc.value();
}

cplx thm15_rhs(const CuspForm& f, const ZeroCache& zc, const ZeroCache& zcb, double X, const TruncationSpec& trunc) {
    return Thm15Rhs(f, zc, zcb, trunc)(X);
}

}  // namespace msym
