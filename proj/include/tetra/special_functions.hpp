#pragma once

#include <vector>

#include "tetra/cauchy_solver.hpp"

namespace tetra {

struct BranchPolicy {
    int max_descents = 64;
};

/// z is in C_{-2} iff it is not a real number <= -2.
bool in_domain_c2(cplx z);

/// Holomorphic tetration on C_{-2}: strip value shifted by round(Re z) with exp_b / principal log_b.
/// Throws OutsideDomain, DomainClipped, Overflow or BranchViolation.
cplx sexp(const TetrationTable& table, cplx z, const BranchPolicy& policy = {});

/// Inverse of sexp on its principal region, with slog(1) = 0.
///
/// Candidates are w = s + j where s is a strip preimage (|Re s| <= 1/2) of
/// log_b^j(z) for j >= 0 or exp_b^{-j}(z) for j < 0; above Im = A - 3/2 the strip
/// preimage comes from the asymptotic form L + Q(c^{s-K}). Among candidates right
/// of the line through -2 along -1/ln c (mirrored for Im w < 0) the one closest to
/// the real axis is returned.
/// Throws AtFixedPoint for L, L* and NoConvergence when no candidate exists.
cplx slog(const TetrationTable& table, cplx z, const BranchPolicy& policy = {});

/// exp_b^{c}(z) = sexp(c + slog(z)); BranchViolation if c + slog(z) leaves C_{-2}.
cplx iterate(const TetrationTable& table, cplx c, cplx z);

struct IterateSample {
    double c;
    double x;
    double y;  ///< NaN where the iterate is undefined or not real.
};

std::vector<IterateSample> emit_iterate_family(const TetrationTable& table,
                                               const std::vector<double>& c_list, double x_min,
                                               double x_max, int n_points);

namespace detail {

/// sexp that continues past |Im z| = A - 1 with the asymptotic form instead of clipping.
cplx sexp_extended(const TetrationTable& table, cplx z, const BranchPolicy& policy = {});

}  // namespace detail

}  // namespace tetra
