#pragma once

#include <vector>

#include "tetra/fixpoint.hpp"

namespace tetra {

/// Result of a chi evaluation with the log-branch offsets chosen at each step.
struct ChiTrace {
    cplx value;
    int steps = 0;
    std::vector<int> branch_offsets;
};

/// Koenigs function of exp_b at L (or at L* when built with conjugate = true).
///
/// Near the fixed point chi is the inverse of the power series
/// P(w) = L + sum_k q_k w^k solving P(c w) = exp_b(P(w)); further away the
/// log_b chain tracking the fixed point brings z into the series disk first.
class KoenigsContext {
public:
    static constexpr int kDefaultDepth = 60;

    /// depth = 0 selects max(60, 12 / ln|c|) log steps.
    explicit KoenigsContext(const FixedPointData& fp, bool conjugate = false, int depth = 0);

    const FixedPointData& fixed_point() const noexcept { return fp_; }
    const Base& base() const noexcept { return fp_.b; }
    /// The tracked fixed point (L, or L* for a conjugate context).
    cplx L() const noexcept { return L_; }
    /// Multiplier at the tracked fixed point.
    cplx c() const noexcept { return c_; }
    cplx log_c() const noexcept { return log_c_; }
    int depth() const noexcept { return depth_; }
    int branch_offset() const noexcept { return 0; }
    bool conjugate() const noexcept { return conjugate_; }

    /// Log branch nearest to the tracked fixed point: principal log_b plus 2 pi i k / ln b.
    cplx tracked_log(cplx z, int* offset = nullptr) const;

    cplx chi(cplx z) const;
    ChiTrace chi_traced(cplx z) const;
    cplx chi_inverse(cplx w) const;
    cplx regular_abel(cplx z) const;

    /// Series part: P(w) - L for |w| <= series_radius().
    cplx series(cplx w) const;
    cplx series_derivative(cplx w) const;
    double series_radius() const noexcept { return series_radius_; }
    const std::vector<cplx>& coefficients() const noexcept { return q_; }

private:
    ChiTrace chi_impl(cplx z, int extra_steps) const;
    cplx invert_series(cplx d) const;

    FixedPointData fp_;
    bool conjugate_;
    int depth_;
    cplx L_;
    cplx c_;
    cplx log_c_;
    std::vector<cplx> q_;
    double series_radius_;
    double capture_radius_;
};

}  // namespace tetra
