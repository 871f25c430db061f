#include "msym/special.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <vector>

namespace msym {

namespace {

constexpr cplx I(0.0, 1.0);

// B_{2j}/(2j)! for j = 1..13
constexpr std::array<double, 13> kBernoulliOverFact = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
    657931.0 / 186134520519971831808000000.0,
};

// B_{2j} / (2j(2j-1)) for Stirling, j = 1..10
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

// log(sin(pi z)) without overflow for large |Im z|.
cplx log_sin_pi(cplx z) {
    if (std::imag(z) >= 0.0) {
        // sin(pi z) = e^{-i pi z} (e^{2 pi i z} - 1) / (2i)
        cplx e = std::exp(2.0 * kPi * I * z);
        return -I * kPi * z + std::log((e - 1.0) / (2.0 * I));
    }
    // sin(pi z) = e^{i pi z} (1 - e^{-2 pi i z}) / (2i)
    cplx e = std::exp(-2.0 * kPi * I * z);
    return I * kPi * z + std::log((1.0 - e) / (2.0 * I));
}

cplx lgamma_right(cplx z) {
    // Re z >= 0.5: shift up, then Stirling.
    cplx shift = 0.0;
    while (std::abs(z) < 18.0 || std::real(z) < 10.0) {
        shift += std::log(z);
        z += 1.0;
    }
    cplx zinv = 1.0 / z;
    cplx zinv2 = zinv * zinv;
    cplx series = 0.0;
    cplx p = zinv;
    for (double c : kStirling) {
        series += c * p;
        p *= zinv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series - shift;
}

std::atomic<bool> g_warned_height{false};

}  // namespace

void PrecisionPolicy::validate() const {
    if (!(target_abs_error > 0.0) || !(target_rel_error > 0.0))
        throw std::invalid_argument("precision policy: target errors must be positive");
    if (max_terms < 64) throw std::invalid_argument("precision policy: max_terms must be >= 64");
}

bool is_nonpositive_integer(cplx s, long* n) {
    if (std::imag(s) != 0.0) return false;
    double r = std::real(s);
    if (r > 0.0 || r != std::floor(r)) return false;
    if (n) *n = static_cast<long>(-r);
    return true;
}

cplx lgamma_complex(cplx s) {
    long n = 0;
    if (is_nonpositive_integer(s, &n)) throw PoleError("Gamma pole at s = -" + std::to_string(n), n);
    if (std::real(s) >= 0.5) return lgamma_right(s);
    // Gamma(s) = pi / (sin(pi s) Gamma(1-s))
    return std::log(kPi) - log_sin_pi(s) - lgamma_right(1.0 - s);
}

cplx gamma_complex(cplx s) { return std::exp(lgamma_complex(s)); }

cplx rgamma_complex(cplx s) {
    if (is_nonpositive_integer(s)) return 0.0;
    return std::exp(-lgamma_complex(s));
}

cplx incomplete_gamma_upper(cplx s, double x, const PrecisionPolicy& pol) {
    pol.validate();
    if (!(x > 0.0)) throw std::invalid_argument("incomplete_gamma_upper: x must be positive");
    const double eps = 1e-16;
    cplx prefactor = std::exp(s * std::log(x) - x);
    bool near_pole = false;
    {
        double r = std::round(std::real(s));
        near_pole = r <= 0.0 && std::abs(s - r) < 1e-6;
    }
    if (x >= std::abs(s) + 1.0 || near_pole) {
        // Modified Lentz on Gamma(s,x) = e^{-x} x^s / (x+1-s - 1(1-s)/(x+3-s - ...))
        const double tiny = 1e-300;
        cplx b = x + 1.0 - s;
        cplx c = 1.0 / tiny;
        cplx d = 1.0 / b;
        cplx h = d;
        for (int i = 1; i <= pol.max_terms * 4; ++i) {
            cplx an = -static_cast<double>(i) * (static_cast<double>(i) - s);
            b += 2.0;
            d = an * d + b;
            if (std::abs(d) < tiny) d = tiny;
            c = b + an / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            cplx delta = d * c;
            h *= delta;
            if (std::abs(delta - 1.0) < eps) return prefactor * h;
        }
        throw ConvergenceError("incomplete_gamma_upper: continued fraction did not converge",
                               "continued-fraction");
    }
    // Gamma(s) - gamma(s,x), gamma(s,x) = x^s e^{-x} sum x^k / (s (s+1) ... (s+k))
    cplx term = 1.0 / s;
    cplx sum = term;
    for (int k = 1; k <= pol.max_terms; ++k) {
        term *= x / (s + static_cast<double>(k));
        sum += term;
        if (std::abs(term) < eps * std::abs(sum)) return gamma_complex(s) - prefactor * sum;
    }
    throw ConvergenceError("incomplete_gamma_upper: series did not converge", "series");
}

namespace {

// 1/2 int_{-inf}^{inf} exp(-x cosh(t + i th) + nu (t + i th)) dt by the trapezoid rule,
// node spacing h, |t| <= tmax.
cplx k_trapezoid(cplx nu, double x, double th, double h, double tmax) {
    const double ct = std::cos(th), st = std::sin(th);
    const cplx rot = std::exp(I * th * nu);
    CompensatedSum<cplx> acc;
    long n = static_cast<long>(std::ceil(tmax / h));
    for (long j = -n; j <= n; ++j) {
        double t = j * h;
        cplx arg(-x * std::cosh(t) * ct, -x * std::sinh(t) * st);
        acc.add(std::exp(arg + nu * t));
    }
    return 0.5 * h * rot * acc.value();
}

}  // namespace

cplx bessel_k(cplx nu, double x, const PrecisionPolicy& pol) {
    pol.validate();
    if (!(x > 0.0)) throw std::invalid_argument("bessel_k: x must be positive");
    // Tilt the contour to Im t = th so the e^{-pi|Im nu|/2} size of K is not produced by
    // cancellation.
    double g = std::imag(nu);
    double delta = std::abs(g) > 1e-12 ? std::clamp(2.0 / std::abs(g), 0.05, kPi / 2) : kPi / 2;
    // the peak of the tilted integrand is lowest at sin th = |Im nu| / x
    double th = (g >= 0 ? 1.0 : -1.0) * std::min(kPi / 2 - delta, std::asin(std::min(1.0, std::abs(g) / x)));
    double ct = std::cos(th);
    double a = std::abs(std::real(nu));
    // peak of -x ct cosh t + a t, then truncate 46 e-folds below it
    double tpk = std::asinh(a / (x * ct));
    double epk = -x * ct * std::cosh(tpk) + a * tpk;
    double tmax = tpk + 1.0;
    while (-x * ct * std::cosh(tmax) + a * tmax > epk - 46.0) tmax += 0.25;
    double h = std::min(0.25, delta / 4.0);
    cplx prev = k_trapezoid(nu, x, th, h, tmax);
    long nodes = static_cast<long>(2 * tmax / h);
    while (nodes < 64L * pol.max_terms) {
        h *= 0.5;
        cplx cur = k_trapezoid(nu, x, th, h, tmax);
        double scale = std::max(std::abs(cur), 1e-300);
        double diff = std::abs(cur - prev);
        if (diff <= 1e-13 * scale || diff < 1e-290) return cur;
        prev = cur;
        nodes *= 2;
    }
    throw ConvergenceError("bessel_k: trapezoid refinement did not converge", "quadrature");
}

namespace {

// (e^x - 1)/x and its derivative
cplx expm1_over(cplx x) {
    if (std::abs(x) < 1e-3) return 1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0;
    return (std::exp(x) - 1.0) / x;
}

cplx expm1_over_prime(cplx x) {
    if (std::abs(x) < 1e-3) return 0.5 + x / 3.0 + x * x / 8.0 + x * x * x / 30.0;
    return (std::exp(x) * (x - 1.0) + 1.0) / (x * x);
}

HurwitzValue hurwitz_impl(cplx s, double a, bool want_derivative, bool minus_pole,
                          const PrecisionPolicy& pol) {
    pol.validate();
    if (!(a > 0.0)) throw std::invalid_argument("hurwitz_zeta: a must be positive");
    if (!minus_pole && s == cplx(1.0, 0.0)) throw PoleError("Hurwitz zeta pole at s = 1", 1);
    if (std::abs(std::imag(s)) > 120.0 && !g_warned_height.exchange(true))
        std::cerr << "warning: hurwitz_zeta beyond validated height |Im s| <= 120\n";
    long M = std::max<long>(static_cast<long>(std::ceil(std::abs(s))), 30);
    if (M > pol.max_terms * 64L) throw ConvergenceError("hurwitz_zeta: cutoff too large", "euler-maclaurin");
    CompensatedSum<cplx> val, der;
    for (long k = 0; k < M; ++k) {
        double lk = std::log(k + a);
        cplx t = std::exp(-s * lk);
        val.add(t);
        if (want_derivative) der.add(-lk * t);
    }
    const double w = M + a;
    const double lw = std::log(w);
    cplx wms = std::exp(-s * lw);  // w^{-s}
    if (!minus_pole) {
        cplx tail = w * wms / (s - 1.0);
        val.add(tail);
        if (want_derivative) der.add(-lw * tail - w * wms / ((s - 1.0) * (s - 1.0)));
    } else {
        // w^{1-s}/(s-1) - 1/(s-1) = -log(w) (e^x - 1)/x, x = (1-s) log w
        cplx x = (1.0 - s) * lw;
        val.add(-lw * expm1_over(x));
        if (want_derivative) {
            der.add(lw * lw * expm1_over_prime(x));
        }
    }
    val.add(0.5 * wms);
    if (want_derivative) der.add(-0.5 * lw * wms);
    // sum_j B_2j/(2j)! (s)_{2j-1} w^{-s-2j+1}
    cplx poch = s;         // (s)_{2j-1}
    cplx dpoch = 1.0;      // d/ds (s)_{2j-1}
    cplx wpow = wms / w;   // w^{-s-2j+1}
    for (std::size_t j = 0; j < kBernoulliOverFact.size(); ++j) {
        cplx term = kBernoulliOverFact[j] * poch * wpow;
        val.add(term);
        if (want_derivative) der.add(kBernoulliOverFact[j] * (dpoch - lw * poch) * wpow);
        // advance (s)_{2j-1} -> (s)_{2j+1}
        double m1 = 2.0 * j + 1.0, m2 = 2.0 * j + 2.0;
        cplx f1 = s + m1, f2 = s + m2;
        dpoch = dpoch * f1 * f2 + poch * (f1 + f2);
        poch = poch * f1 * f2;
        wpow /= w * w;
    }
    return {val.value(), want_derivative ? der.value() : cplx(0.0)};
}

}  // namespace

HurwitzValue hurwitz_zeta_shifted(cplx s, double a, bool want_derivative, const PrecisionPolicy& pol) {
    return hurwitz_impl(s, a, want_derivative, false, pol);
}

HurwitzValue hurwitz_zeta_minus_pole(cplx s, double a, bool want_derivative, const PrecisionPolicy& pol) {
    return hurwitz_impl(s, a, want_derivative, true, pol);
}

HurwitzValue hurwitz_zeta(cplx s, double a, bool want_derivative, const PrecisionPolicy& pol) {
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("hurwitz_zeta: a must lie in (0,1]");
    return hurwitz_zeta_shifted(s, a, want_derivative, pol);
}

}  // namespace msym
