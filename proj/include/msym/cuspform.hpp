#pragma once

#include <array>
#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "msym/chars.hpp"
#include "msym/special.hpp"

namespace msym {

struct Curve {
    std::string label;
    long level = 0;
    std::array<long, 5> a{};  // a1 a2 a3 a4 a6
};

long curve_discriminant(const Curve& c);
// Built-in E11a and E17a, or entries loaded from a registry file.
const Curve& curve_by_label(const std::string& label);
void load_curve_registry(const std::filesystem::path& file);

// a_p = p + 1 - #E(F_p), counting the singular point at p = level.
long ap_point_count(const Curve& c, long p);

// q prod (1-q^k)^2 (1-q^{11k})^2, coefficients 0..n_max (index 0 is 0).
std::vector<long> eta_product_11(long n_max);

struct LfValue {
    cplx value;
    cplx derivative;
};

enum class TwistMode { series, central };

class CuspForm {
public:
    explicit CuspForm(Curve curve, long initial_terms = 20000);
    CuspForm(const CuspForm&) = delete;
    CuspForm& operator=(const CuspForm&) = delete;

    const Curve& curve() const { return curve_; }
    long level() const { return curve_.level; }
    int sign_eps() const { return eps_; }

    void ensure(long n_max) const;
    long n_max() const;
    long coeff(long n) const;
    std::vector<long> coeffs(long n_max) const;  // index 0 unused

    // coefficient cache file: first line "n_max <n>", then a_1..a_n one per line
    void save_coefficients(const std::filesystem::path& file) const;
    // Replaces the in-memory table by the file content (no recomputation).
    void load_coefficients(const std::filesystem::path& file);

    cplx f_value(cplx z) const;
    // A(z) = sum (a_n/n) e(nz)
    cplx period_A(cplx z, double tol = 1e-11) const;
    static long period_terms(double y, double tol = 1e-11);

    LfValue lf_value(cplx s, bool want_derivative = false) const;
    cplx completed_lf(cplx s) const;  // N^{s/2} (2 pi)^{-s} Gamma(s) L_f(s)
    cplx lf_value_incgamma(cplx s) const;
    cplx lf_series(cplx s, long terms) const;
    cplx lf_twisted(const DirichletCharacter& chi, cplx s, TwistMode mode) const;
    // root number of the twist by chi (determined numerically, cached)
    cplx twist_root_number(const DirichletCharacter& chi) const;

private:
    void compute_coefficients(long n_max) const;

    Curve curve_;
    int eps_ = 0;
    mutable std::shared_mutex mu_;
    mutable std::vector<long> a_;  // a_[n], a_[0] = 0
    mutable std::mutex twist_mu_;
    mutable std::vector<std::pair<long, cplx>> twist_eps_;  // keyed by chi index table hash
};

}  // namespace msym
