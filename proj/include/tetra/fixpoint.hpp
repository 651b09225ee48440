#pragma once

#include <complex>

namespace tetra {

using cplx = std::complex<double>;

/// Validated base b > e^{1/e}. Immutable once constructed.
class Base {
public:
    /// Throws Error(BaseOutOfRange) unless b is finite and b > e^{1/e}.
    explicit Base(double b);

    double value() const noexcept { return b_; }
    double log() const noexcept { return log_b_; }

private:
    double b_;
    double log_b_;
};

Base validate_base(double b);

/// b^z on the principal branch of the power.
inline cplx exp_b(const Base& b, cplx z) { return std::exp(b.log() * z); }

/// Principal log_b with -pi < Im ln z <= pi.
inline cplx log_b(const Base& b, cplx z) { return std::log(z) / b.log(); }

struct FixedPointData {
    Base b;
    cplx L;
    cplx L_conj;
    cplx c;
    double residual;
};

/// Fixed point of exp_b in the upper half plane closest to the real axis.
/// Throws BaseOutOfRange or NoConvergence.
FixedPointData principal_fixed_point(const Base& b);

/// c = ln(b) L; throws EvaluationFailure if it disagrees with ln(L) beyond 1e-12.
cplx multiplier(const FixedPointData& fp);

}  // namespace tetra
