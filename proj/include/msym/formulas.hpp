#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "msym/cuspform.hpp"
#include "msym/dirichlet_l.hpp"
#include "msym/sums.hpp"

namespace msym {

struct TruncationSpec {
    double T = 40;                 // zero height
    long n_max = 12;               // Fourier modes
    long k_max = 8;                // k-sum cutoff
    long trivial_zero_floor = -10;

    void validate() const;
};

// constant term at cusp 0: N^{1-3w} (consistent) or 1/N^{1-3w} (as printed)
enum class Lemma22Variant { consistent, printed };

// nth Fourier coefficient (without e(nx)) of the completed Eisenstein series L(2w,chi) E_a(z,w,chi),
// counted over +-(c,d).
cplx lemma22_fourier(const DirichletCharacter& chi, cplx w, long n, double y, Cusp cusp,
                     Lemma22Variant variant = Lemma22Variant::consistent);

cplx central_value(const CuspForm& f, const DirichletCharacter& chi);

cplx thm12_constant_term(const CuspForm& f, const DirichletCharacter& chi, cplx s, double y);
cplx cor14_phi_star_zero(const CuspForm& f, const DirichletCharacter& chi, cplx s);
// sum_{c>0} sum_{d mod c} chi(d) c^{-2s} <gamma, f> in closed form
cplx phi_star_zero_derived(const CuspForm& f, const DirichletCharacter& chi, cplx s);

struct LineValue {
    std::string name;
    cplx value;
    bool available = true;
    double last_term = 0;  // magnitude of the last included term
    std::string note;
};

struct LineBreakdown {
    std::vector<LineValue> lines;
    cplx total;  // sum of the available lines, in order

    const LineValue& line(const std::string& name) const;
    nlohmann::json to_json() const;
};

// k-sum with L_f(k) as printed, or with L_f(2s+k) from the residue at w = 1-s-k
enum class KSumVariant { printed, corrected };

// Fourier coefficient n != 0 of E*(x+iy, s, chi) without the Maass line.
LineBreakdown thm13_nonmaass(const CuspForm& f, const ZeroCache& zeros_chi, const ZeroCache& zeros_chibar, cplx s,
                             long n, double y, const TruncationSpec& trunc,
                             KSumVariant variant = KSumVariant::printed);

enum class MainTermMode { literal, residue };

// Coefficients are computed once; operator() evaluates at X.
class Thm11MainTerm {
public:
    Thm11MainTerm(const CuspForm& f, const ZeroCache& zeros_chi, const ZeroCache& zeros_chibar, cplx z,
                  MainTermMode mode, const TruncationSpec& trunc);
    cplx operator()(double X) const;
    std::size_t terms() const { return coef_.size(); }
    double largest_last_term() const { return last_term_; }

private:
    struct Term {
        cplx coef;
        cplx exponent;  // X^{exponent}
    };
    std::vector<Term> coef_;
    double last_term_ = 0;
};

cplx thm11_main_term(const CuspForm& f, const ZeroCache& zeros_chi, const ZeroCache& zeros_chibar, cplx z, double X,
                     MainTermMode mode, const TruncationSpec& trunc);

enum class Thm15Variant { printed, derived };

class Thm15Rhs {
public:
    Thm15Rhs(const CuspForm& f, const ZeroCache& zeros_chi, const ZeroCache& zeros_chibar,
             const TruncationSpec& trunc, Thm15Variant variant = Thm15Variant::printed);
    cplx operator()(double X) const;
    // contribution of each zero at X (constant term excluded), for diagnostics
    std::vector<std::pair<cplx, cplx>> zero_terms(double X) const;
    cplx constant() const { return constant_; }

private:
    struct Term {
        cplx rho;
        cplx coef;         // times X^{rho/2}
        cplx log_coef;     // times X^{rho/2} log(X)/2, double poles only
        bool trivial = false;
    };
    std::vector<Term> terms_;
    cplx constant_;
};

cplx thm15_rhs(const CuspForm& f, const ZeroCache& zeros_chi, const ZeroCache& zeros_chibar, double X,
               const TruncationSpec& trunc);

}  // namespace msym
