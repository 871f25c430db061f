#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace msym {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct PrecisionPolicy {
    double target_abs_error = 1e-10;
    double target_rel_error = 1e-9;
    int max_terms = 4096;

    void validate() const;
};

// Thrown at a pole; index() is the pole location n for s = -n (or 1 for zeta).
class PoleError : public std::domain_error {
public:
    PoleError(const std::string& what, long index) : std::domain_error(what), index_(index) {}
    long index() const { return index_; }

private:
    long index_;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::string branch)
        : std::runtime_error(what + " [" + branch + "]"), branch_(std::move(branch)) {}
    const std::string& branch() const { return branch_; }

private:
    std::string branch_;
};

bool is_nonpositive_integer(cplx s, long* n = nullptr);

// log Gamma, continuous along horizontal lines away from the poles.
cplx lgamma_complex(cplx s);
cplx gamma_complex(cplx s);
// 1/Gamma, entire; exactly 0 at non-positive integers.
cplx rgamma_complex(cplx s);

cplx incomplete_gamma_upper(cplx s, double x, const PrecisionPolicy& pol = {});

cplx bessel_k(cplx nu, double x, const PrecisionPolicy& pol = {});

struct HurwitzValue {
    cplx value;
    cplx derivative;
};

// a in (0,1]. Emits a warning to stderr once if |Im s| > 120.
HurwitzValue hurwitz_zeta(cplx s, double a, bool want_derivative = false,
                          const PrecisionPolicy& pol = {});
// Same for any a > 0, used for lattice tails.
HurwitzValue hurwitz_zeta_shifted(cplx s, double a, bool want_derivative = false,
                                  const PrecisionPolicy& pol = {});
// zeta(s, a) - 1/(s-1): regular at s = 1.
HurwitzValue hurwitz_zeta_minus_pole(cplx s, double a, bool want_derivative = false,
                                     const PrecisionPolicy& pol = {});

// Neumaier compensated accumulator.
template <class T>
class CompensatedSum {
public:
    void add(T x) {
        T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

}  // namespace msym
