#include "msym/chars.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "msym/special.hpp"

namespace msym {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

long positive_mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

long mod_pow(long b, long e, long m) {
    __int128 r = 1, x = positive_mod(b, m);
    while (e > 0) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<long>(r);
}

long mod_inverse(long a, long m) {
    long g = m, x = 0, x1 = 1, a1 = positive_mod(a, m);
    while (a1 != 0) {
        long q = g / a1;
        long t = g - q * a1;
        g = a1;
        a1 = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) throw std::invalid_argument("mod_inverse: not a unit");
    return positive_mod(x, m);
}

long least_primitive_root(long q) {
    long phi = q - 1;
    std::vector<long> pf;
    long m = phi;
    for (long p = 2; p * p <= m; ++p)
        if (m % p == 0) {
            pf.push_back(p);
            while (m % p == 0) m /= p;
        }
    if (m > 1) pf.push_back(m);
    for (long g = 2; g < q; ++g) {
        bool ok = true;
        for (long p : pf)
            if (mod_pow(g, phi / p, q) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    return 1;  // q = 2
}

DirichletCharacter DirichletCharacter::make(long q, long k) {
    if (!is_prime(q)) throw std::invalid_argument("make_character: modulus must be prime");
    if (q == 2) throw std::invalid_argument("make_character: q = 2 has no nontrivial characters");
    if (k < 0 || k > q - 2) throw std::invalid_argument("make_character: image index out of [0, q-2]");
    DirichletCharacter c;
    c.q_ = q;
    c.g_ = least_primitive_root(q);
    c.k_ = k;
    c.idx_.assign(q, -1);
    long x = 1;
    for (long j = 0; j < q - 1; ++j) {
        c.idx_[x] = (j * k) % (q - 1);
        x = x * c.g_ % q;
    }
    c.finish();
    return c;
}

DirichletCharacter DirichletCharacter::from_index_table(long q, const std::vector<long>& t) {
    if (!is_prime(q) || q == 2) throw std::invalid_argument("character table: modulus must be an odd prime");
    if (static_cast<long>(t.size()) != q) throw std::invalid_argument("character table: need q entries");
    DirichletCharacter c;
    c.q_ = q;
    c.g_ = least_primitive_root(q);
    c.idx_.assign(q, -1);
    for (long n = 1; n < q; ++n) c.idx_[n] = positive_mod(t[n], q - 1);
    for (long m = 1; m < q; ++m)
        for (long n = 1; n < q; ++n)
            if (c.idx_[m * n % q] != (c.idx_[m] + c.idx_[n]) % (q - 1))
                throw std::invalid_argument("character table: not multiplicative");
    c.k_ = c.idx_[c.g_];
    c.finish();
    return c;
}

void DirichletCharacter::finish() {
    roots_.resize(q_ - 1);
    for (long j = 0; j < q_ - 1; ++j) {
        // exact values at the quarter points keep real characters real
        long num = 4 * j, den = q_ - 1;
        if (num % den == 0) {
            static const cplx quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            roots_[j] = quarter[(num / den) % 4];
        } else {
            double t = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(q_ - 1);
            roots_[j] = {std::cos(t), std::sin(t)};
        }
    }
    order_ = (q_ - 1) / std::gcd(k_, q_ - 1);
    even_ = idx_[q_ - 1] == 0;
}

long DirichletCharacter::index(long n) const { return idx_[positive_mod(n, q_)]; }

cplx DirichletCharacter::operator()(long n) const {
    long j = index(n);
    return j < 0 ? cplx(0.0) : roots_[j];
}

DirichletCharacter DirichletCharacter::conj() const {
    DirichletCharacter c = *this;
    c.k_ = positive_mod(-k_, q_ - 1);
    for (long n = 1; n < q_; ++n) c.idx_[n] = positive_mod(-idx_[n], q_ - 1);
    c.finish();
    return c;
}

std::string DirichletCharacter::label() const {
    return "chi_" + std::to_string(q_) + "_" + std::to_string(k_);
}

nlohmann::json DirichletCharacter::to_json() const {
    return {{"modulus", q_}, {"generator", g_}, {"generator_image_index", k_}};
}

DirichletCharacter DirichletCharacter::from_json(const nlohmann::json& j) {
    long q = j.at("modulus").get<long>();
    long k = j.at("generator_image_index").get<long>();
    DirichletCharacter c = make(q, k);
    if (j.contains("generator") && j.at("generator").get<long>() != c.generator())
        throw std::invalid_argument("character json: generator is not the least primitive root");
    return c;
}

cplx gauss_sum(const DirichletCharacter& chi) {
    long q = chi.modulus();
    CompensatedSum<cplx> s;
    for (long a = 1; a < q; ++a) {
        double t = 2.0 * kPi * static_cast<double>(a) / static_cast<double>(q);
        s.add(chi(a) * cplx(std::cos(t), std::sin(t)));
    }
    return s.value();
}

cplx twisted_divisor_sum(cplx s, long n, const DirichletCharacter& chi) {
    if (n == 0) throw std::invalid_argument("twisted_divisor_sum: n = 0");
    n = std::labs(n);
    cplx total = 0.0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        total += chi(d) * std::exp(s * std::log(static_cast<double>(d)));
        long e = n / d;
        if (e != d) total += chi(e) * std::exp(s * std::log(static_cast<double>(e)));
    }
    return total;
}

}  // namespace msym
