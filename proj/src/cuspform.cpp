#include "msym/cuspform.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "msym/dirichlet_l.hpp"

namespace msym {

namespace {

constexpr cplx I(0.0, 1.0);

std::map<std::string, Curve>& registry() {
    static std::map<std::string, Curve> r = {
        {"E11a", {"E11a", 11, {0, -1, 1, -10, -20}}},
        {"E17a", {"E17a", 17, {1, -1, 1, -1, -14}}},
    };
    return r;
}
std::mutex g_registry_mu;


// ---- Gaussian-smoothed approximate functional equation ----------------------------------
//
// For Lambda(s) = Q^s Gamma(s) L(s) = eps Lambda~(2-s), with G(u) = exp(u^2/alpha):
//   L(s) = rgamma(s) [ sum a_n n^{-s} W(s,n) + eps Q^{2-2s} sum b_n n^{s-2} W(2-s,n) ]
//   W(w,x) = (1/2 pi i) int_{(c)} G(u) Gamma(w+u) (Q/x)^u du/u.

constexpr double kAlpha = 8.0;

// sum_n coef[n] n^{-w} W(w, n); coef indexed from 1.
cplx smoothed_sum(cplx w, double Q, const std::vector<cplx>& coef) {
    const double c = std::max(1.2, 1.2 - std::real(w));
    const double apq = kAlpha * kPi / 4.0;
    const double V = apq + std::sqrt(apq * apq + kAlpha * (60.0 + c * c / kAlpha));
    const double h = 0.12;
    const long m = static_cast<long>(std::ceil(V / h));
    std::vector<cplx> wt(2 * m + 1);
    for (long j = -m; j <= m; ++j) {
        cplx u(c, j * h);
        cplx e = u * u / kAlpha + lgamma_complex(w + u) + u * std::log(Q);
        wt[j + m] = h / (2.0 * kPi) * std::exp(e) / u;
    }
    double wsum = 0.0;
    for (auto& x : wt) wsum += std::abs(x);
    CompensatedSum<cplx> total;
    int quiet = 0;
    const long navail = static_cast<long>(coef.size()) - 1;
    for (long n = 1;; ++n) {
        if (n > navail) throw std::runtime_error("smoothed AFE: coefficient table too short");
        const double ln = std::log(static_cast<double>(n));
        // sum_j wt_j n^{-u_j}, u_j = c + i j h
        cplx rot = std::polar(1.0, m * h * ln);
        const cplx step = std::polar(1.0, -h * ln);
        cplx acc = 0.0;
        for (long j = 0; j <= 2 * m; ++j) {
            acc += wt[j] * rot;
            rot *= step;
        }
        cplx Wn = acc * std::exp(-c * ln);
        cplx term = coef[n] * std::exp(-w * ln) * Wn;
        total.add(term);
        // below the rounding floor of the quadrature, W_n is noise
        const double wabs = std::max(0.0, std::abs(Wn) - 1e-14 * wsum * std::exp(-c * ln));
        double bound = wabs * std::exp(-std::real(w) * ln) * std::sqrt(double(n)) * (2.0 + ln);
        if (n > 10 && bound < 1e-17 * std::max(1e-300, std::abs(total.value()))) {
            if (++quiet >= 8) break;
        } else {
            quiet = 0;
        }
    }
    return total.value();
}

cplx afe_value(cplx s, double Q, cplx eps, const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx rg = rgamma_complex(s);
    if (rg == 0.0) return 0.0;
    cplx s1 = smoothed_sum(s, Q, a);
    cplx s2 = smoothed_sum(2.0 - s, Q, b);
    return rg * (s1 + eps * std::exp((2.0 - 2.0 * s) * std::log(Q)) * s2);
}

cplx solve_root_number(cplx s0, cplx direct, double Q, const std::vector<cplx>& a,
                       const std::vector<cplx>& b) {
    cplx s1 = smoothed_sum(s0, Q, a);
    cplx s2 = smoothed_sum(2.0 - s0, Q, b);
    return (direct / rgamma_complex(s0) - s1) / (std::exp((2.0 - 2.0 * s0) * std::log(Q)) * s2);
}

}  // namespace

long curve_discriminant(const Curve& c) {
    const long a1 = c.a[0], a2 = c.a[1], a3 = c.a[2], a4 = c.a[3], a6 = c.a[4];
    const long b2 = a1 * a1 + 4 * a2, b4 = 2 * a4 + a1 * a3, b6 = a3 * a3 + 4 * a6;
    const long b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

const Curve& curve_by_label(const std::string& label) {
    std::lock_guard<std::mutex> lk(g_registry_mu);
    auto it = registry().find(label);
    if (it == registry().end()) throw std::invalid_argument("unknown curve label: " + label);
    return it->second;
}

void load_curve_registry(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open curve registry " + file.string());
    auto j = nlohmann::json::parse(in);
    std::lock_guard<std::mutex> lk(g_registry_mu);
    for (auto& [label, v] : j.items()) {
        Curve c;
        c.label = label;
        c.level = v.at("level").get<long>();
        auto co = v.at("a").get<std::vector<long>>();
        if (co.size() != 5) throw std::invalid_argument("curve registry: need five coefficients for " + label);
        std::copy(co.begin(), co.end(), c.a.begin());
        if (!is_prime(c.level)) throw std::invalid_argument("curve registry: level must be prime");
        registry()[label] = c;
    }
}

long ap_point_count(const Curve& c, long p) {
    if (!is_prime(p)) throw std::invalid_argument("ap_point_count: p must be prime");
    long disc = curve_discriminant(c);
    if (p != c.level && disc % p == 0)
        throw std::invalid_argument("ap_point_count: bad reduction at p = " + std::to_string(p));
    long count = 1;  // point at infinity
    auto md = [p](long x) { return positive_mod(x, p); };
    const long a1 = md(c.a[0]), a2 = md(c.a[1]), a3 = md(c.a[2]), a4 = md(c.a[3]), a6 = md(c.a[4]);
    if (p == 2) {
        for (long x = 0; x < 2; ++x)
            for (long y = 0; y < 2; ++y)
                if (md(y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6) == 0) ++count;
        return p + 1 - count;
    }
    // roots[d] = #{y : y^2 = d mod p}
    std::vector<unsigned char> roots(p, 0);
    roots[0] = 1;
    for (long y = 1, sq = 1; y <= p / 2; ++y) {
        roots[sq] = 2;
        sq += 2 * y + 1;
        while (sq >= p) sq -= p;
    }
    // y^2 + (a1 x + a3) y = cubic(x) has roots[D(x)] solutions, D(x) = (a1 x + a3)^2 + 4 cubic(x);
    // step D along x by forward differences
    auto D = [&](long x) {
        long b = (a1 * x + a3) % p;
        return (b * b + 4 * ((x * x % p * x) + a2 * x % p * x + a4 * x + a6)) % p;
    };
    const long d0 = D(0), d1 = D(1), d2 = D(2), d3 = D(3);
    long v = d0, e1 = md(d1 - d0), e2 = md(d2 - 2 * d1 + d0);
    const long e3 = md(d3 - 3 * d2 + 3 * d1 - d0);
    auto add = [p](long& a, long b) {
        a += b;
        if (a >= p) a -= p;
    };
    for (long x = 0; x < p; ++x) {
        count += roots[v];
        add(v, e1);
        add(e1, e2);
        add(e2, e3);
    }
    return p + 1 - count;
}

std::vector<long> eta_product_11(long n_max) {
    std::vector<long> P(n_max + 1, 0);
    if (n_max >= 1) P[1] = 1;
    auto times = [&](long k) {
        for (long i = n_max; i >= k; --i) P[i] -= P[i - k];
    };
    for (long k = 1; k <= n_max; ++k) {
        times(k);
        times(k);
        if (11 * k <= n_max) {
            times(11 * k);
            times(11 * k);
        }
    }
    return P;
}

CuspForm::CuspForm(Curve curve, long initial_terms) : curve_(std::move(curve)) {
    if (!is_prime(curve_.level)) throw std::invalid_argument("CuspForm: level must be prime");
    if (curve_discriminant(curve_) % curve_.level != 0)
        throw std::invalid_argument("CuspForm: curve has good reduction at the level");
    compute_coefficients(std::max<long>(initial_terms, 20000));
    // sign of the functional equation, from the absolutely convergent series at s = 4
    std::vector<cplx> a(a_.begin(), a_.end());
    const double Q = std::sqrt(static_cast<double>(level())) / (2.0 * kPi);
    cplx e = solve_root_number(4.0, lf_series(4.0, 20000), Q, a, a);
    if (std::abs(std::abs(e.real()) - 1.0) > 1e-6 || std::abs(e.imag()) > 1e-6)
        throw std::runtime_error("CuspForm: functional equation sign not found");
    eps_ = e.real() > 0 ? 1 : -1;
}

void CuspForm::compute_coefficients(long n_max) const {
    std::vector<long> spf(n_max + 1, 0);
    for (long i = 2; i <= n_max; ++i)
        if (spf[i] == 0)
            for (long j = i; j <= n_max; j += i)
                if (spf[j] == 0) spf[j] = i;
    std::vector<long> a(n_max + 1, 0);
    if (n_max >= 1) a[1] = 1;
    const long N = curve_.level;
    for (long n = 2; n <= n_max; ++n) {
        long p = spf[n], m = n;
        while (m % p == 0) m /= p;
        if (m > 1) {
            a[n] = a[n / m] * a[m];
            continue;
        }
        // n = p^e
        if (n == p) {
            a[n] = ap_point_count(curve_, p);
        } else if (p == N) {
            a[n] = a[n / p] * a[p];
        } else {
            long prev2 = (n / p == p) ? 1 : a[n / p / p];
            a[n] = a[p] * a[n / p] - p * prev2;
        }
    }
    std::unique_lock lk(mu_);
    if (static_cast<long>(a_.size()) <= n_max) a_ = std::move(a);
}

void CuspForm::ensure(long n_max) const {
    {
        std::shared_lock lk(mu_);
        if (static_cast<long>(a_.size()) > n_max) return;
    }
    compute_coefficients(std::max(n_max, 2 * static_cast<long>(a_.size())));
}

long CuspForm::n_max() const {
    std::shared_lock lk(mu_);
    return static_cast<long>(a_.size()) - 1;
}

long CuspForm::coeff(long n) const {
    ensure(n);
    std::shared_lock lk(mu_);
    return a_[n];
}

std::vector<long> CuspForm::coeffs(long n_max) const {
    ensure(n_max);
    std::shared_lock lk(mu_);
    return std::vector<long>(a_.begin(), a_.begin() + n_max + 1);
}

void CuspForm::save_coefficients(const std::filesystem::path& file) const {
    std::shared_lock lk(mu_);
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write coefficient cache " + file.string());
    out << "n_max " << a_.size() - 1 << "\n";
    for (std::size_t n = 1; n < a_.size(); ++n) out << a_[n] << "\n";
}

void CuspForm::load_coefficients(const std::filesystem::path& file) {
    std::ifstream in(file);
    std::string tag;
    long n = 0;
    if (!(in >> tag >> n) || tag != "n_max" || n < 1)
        throw std::runtime_error("coefficient cache: bad header in " + file.string());
    std::vector<long> a(n + 1, 0);
    for (long i = 1; i <= n; ++i)
        if (!(in >> a[i])) throw std::runtime_error("coefficient cache: truncated " + file.string());
    std::unique_lock lk(mu_);
    a_ = std::move(a);
}

cplx CuspForm::f_value(cplx z) const {
    double y = std::imag(z);
    if (!(y > 0)) throw std::invalid_argument("f_value: Im z must be positive");
    long M = period_terms(y, 1e-14);
    ensure(M);
    std::shared_lock lk(mu_);
    cplx q = std::exp(2.0 * kPi * I * z), qn = q, acc = 0.0;
    for (long n = 1; n <= M; ++n) {
        acc += static_cast<double>(a_[n]) * qn;
        qn *= q;
    }
    return acc;
}

long CuspForm::period_terms(double y, double tol) {
    if (y < 1e-4)
        throw std::invalid_argument("period_A: Im z = " + std::to_string(y) + " below 1e-4 would need " +
                                    std::to_string(static_cast<long>(30.0 / (2 * kPi * y))) + "+ terms");
    double L = std::log(1.0 / tol) + std::log(1.0 + 1.0 / (2.0 * kPi * y)) + 3.0;
    return std::max<long>(8, static_cast<long>(std::ceil(L / (2.0 * kPi * y))));
}

cplx CuspForm::period_A(cplx z, double tol) const {
    long M = period_terms(std::imag(z), tol);
    ensure(M);
    std::shared_lock lk(mu_);
    const double x = std::real(z) - std::floor(std::real(z));
    const double y = std::imag(z);
    CompensatedSum<cplx> acc;
    const cplx step = std::exp(2.0 * kPi * I * cplx(x, y));
    cplx qn = step;
    for (long n = 1; n <= M; ++n) {
        if (n % 64 == 0) qn = std::exp(2.0 * kPi * I * cplx(x, y) * static_cast<double>(n));
        acc.add(static_cast<double>(a_[n]) / n * qn);
        qn *= step;
    }
    return acc.value();
}

cplx CuspForm::lf_series(cplx s, long terms) const {
    ensure(terms);
    std::shared_lock lk(mu_);
    CompensatedSum<cplx> acc;
    for (long n = terms; n >= 1; --n)
        acc.add(static_cast<double>(a_[n]) * std::exp(-s * std::log(static_cast<double>(n))));
    return acc.value();
}

LfValue CuspForm::lf_value(cplx s, bool want_derivative) const {
    if (std::abs(std::imag(s)) > 80.0) throw std::invalid_argument("lf_value: |Im s| > 80");
    const double Q = std::sqrt(static_cast<double>(level())) / (2.0 * kPi);
    auto eval = [&](cplx u) {
        long need = static_cast<long>(Q * (std::abs(u) + 8.0) * 200.0) + 200;
        ensure(need);
        std::vector<cplx> a;
        {
            std::shared_lock lk(mu_);
            a.assign(a_.begin(), a_.end());
        }
        return afe_value(u, Q, static_cast<double>(eps_), a, a);
    };
    LfValue v{eval(s), 0.0};
    if (want_derivative) v.derivative = cauchy_derivative(eval, s);
    return v;
}

cplx CuspForm::completed_lf(cplx s) const {
    const double N = static_cast<double>(level());
    return std::exp(s / 2.0 * std::log(N) - s * std::log(2.0 * kPi) + lgamma_complex(s)) * lf_value(s).value;
}

cplx CuspForm::lf_value_incgamma(cplx s) const {
    const double Q = std::sqrt(static_cast<double>(level())) / (2.0 * kPi);
    cplx rg = rgamma_complex(s);
    if (rg == 0.0) return 0.0;
    ensure(400);
    std::shared_lock lk(mu_);
    CompensatedSum<cplx> acc;
    for (long n = 1; n < static_cast<long>(a_.size()); ++n) {
        double x = n / Q;
        if (x > 60.0 + std::abs(s)) break;
        cplx t1 = std::exp(s * std::log(Q / n)) * incomplete_gamma_upper(s, x);
        cplx t2 = static_cast<double>(eps_) * std::exp((2.0 - s) * std::log(Q / n)) *
                  incomplete_gamma_upper(2.0 - s, x);
        acc.add(static_cast<double>(a_[n]) * (t1 + t2));
    }
    // Lambda = Q^s Gamma(s) L
    return acc.value() * rg * std::exp(-s * std::log(Q));
}

cplx CuspForm::twist_root_number(const DirichletCharacter& chi) const {
    if (chi.modulus() != level() || chi.is_trivial())
        throw std::invalid_argument("twist_root_number: need a nontrivial character modulo the level");
    {
        std::lock_guard<std::mutex> lk(twist_mu_);
        for (auto& [k, e] : twist_eps_)
            if (k == chi.generator_image_index()) return e;
    }
    const double Q = static_cast<double>(level()) / (2.0 * kPi);
    auto A = coeffs(20000);
    std::vector<cplx> a(A.size()), b(A.size());
    for (std::size_t n = 1; n < A.size(); ++n) {
        a[n] = chi(static_cast<long>(n)) * static_cast<double>(A[n]);
        b[n] = std::conj(a[n]);
    }
    auto direct = [&](cplx s) {
        CompensatedSum<cplx> acc;
        for (long n = static_cast<long>(A.size()) - 1; n >= 1; --n)
            acc.add(a[n] * std::exp(-s * std::log(static_cast<double>(n))));
        return acc.value();
    };
    cplx e = solve_root_number(4.0, direct(4.0), Q, a, b);
    cplx e2 = solve_root_number(cplx(4.5, 1.0), direct(cplx(4.5, 1.0)), Q, a, b);
    if (std::abs(std::abs(e) - 1.0) > 1e-7 || std::abs(e - e2) > 1e-7)
        throw std::runtime_error("twist_root_number: inconsistent functional equation");
    std::lock_guard<std::mutex> lk(twist_mu_);
    twist_eps_.emplace_back(chi.generator_image_index(), e);
    return e;
}

cplx CuspForm::lf_twisted(const DirichletCharacter& chi, cplx s, TwistMode mode) const {
    if (chi.modulus() != level())
        throw std::invalid_argument("lf_twisted: character modulus must equal the level");
    const long N = level();
    if (mode == TwistMode::central) {
        if (s != cplx(1.0, 0.0)) throw std::invalid_argument("lf_twisted(central): s must be 1");
        if (!chi.is_even()) throw std::invalid_argument("lf_twisted(central): even characters only");
        // (1/tau(chibar)) sum_a chibar(a) <gamma_a, f>, gamma_a = (a, b; N, d)
        CompensatedSum<cplx> acc;
        for (long a = 1; a < N; ++a) {
            long d = mod_inverse(a, N);
            cplx sym = period_A(cplx(static_cast<double>(a), 1.0) / static_cast<double>(N)) -
                       period_A(cplx(static_cast<double>(-d), 1.0) / static_cast<double>(N));
            acc.add(std::conj(chi(a)) * sym);
        }
        return acc.value() / gauss_sum(chi.conj());
    }
    if (std::real(s) < 1.75)
        throw std::invalid_argument("lf_twisted(series): Re s < 1.75 is outside the supported region");
    if (std::abs(std::imag(s)) > 80.0) throw std::invalid_argument("lf_twisted(series): |Im s| > 80");
    if (chi.is_trivial()) {
        // the trivial character mod N removes the Euler factor at N
        return lf_value(s).value * (1.0 - static_cast<double>(coeff(N)) * std::exp(-s * std::log(double(N))));
    }
    cplx e = twist_root_number(chi);
    const double Q = static_cast<double>(N) / (2.0 * kPi);
    long need = static_cast<long>(Q * (std::abs(s) + 8.0) * 200.0) + 200;
    auto A = coeffs(std::max(need, 20000L));
    std::vector<cplx> a(A.size()), b(A.size());
    for (std::size_t n = 1; n < A.size(); ++n) {
        a[n] = chi(static_cast<long>(n)) * static_cast<double>(A[n]);
        b[n] = std::conj(a[n]);
    }
    return afe_value(s, Q, e, a, b);
}

}  // namespace msym
