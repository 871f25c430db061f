#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

namespace msym {

using cplx = std::complex<double>;

bool is_prime(long n);
long least_primitive_root(long q);
long mod_pow(long b, long e, long m);
long mod_inverse(long a, long m);  // a coprime to m; result in [0, m)
long positive_mod(long a, long m);

// Primitive character modulo a prime q, stored as exact exponents: chi(n) = zeta_{q-1}^{index(n)}.
class DirichletCharacter {
public:
    // chi(g) = exp(2 pi i k / (q-1)) for the least primitive root g.
    static DirichletCharacter make(long q, long generator_image_index);
    // unit_index[n] for n = 0..q-1 (entry 0 ignored), each taken mod q-1.
    static DirichletCharacter from_index_table(long q, const std::vector<long>& unit_index);
    static DirichletCharacter from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    long modulus() const { return q_; }
    long generator() const { return g_; }
    long generator_image_index() const { return k_; }
    long order() const { return order_; }
    bool is_even() const { return even_; }
    bool is_trivial() const { return k_ == 0; }
    bool is_real() const { return order_ <= 2; }

    // -1 for n not a unit, else the exponent in [0, q-1)
    long index(long n) const;
    cplx operator()(long n) const;
    cplx root(long j) const { return roots_[positive_mod(j, q_ - 1)]; }
    DirichletCharacter conj() const;
    std::string label() const;

    bool operator==(const DirichletCharacter& o) const { return q_ == o.q_ && idx_ == o.idx_; }

private:
    DirichletCharacter() = default;
    void finish();

    long q_ = 0, g_ = 0, k_ = 0, order_ = 1;
    bool even_ = true;
    std::vector<long> idx_;    // idx_[n mod q], -1 at 0
    std::vector<cplx> roots_;  // exp(2 pi i j/(q-1))
};

cplx gauss_sum(const DirichletCharacter& chi);

// sigma_s(n, chi) = sum_{d | |n|} chi(d) d^s
cplx twisted_divisor_sum(cplx s, long n, const DirichletCharacter& chi);

}  // namespace msym
