#include "tetra/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "tetra/errors.hpp"

namespace tetra {

namespace {

constexpr double kOverflowMagnitude = 1e300;
constexpr int kMaxSeeds = 8;
constexpr int kMaxAscents = 3;
constexpr int kExtraDescents = 6;
constexpr double kAsymptoticMargin = 1.5;
constexpr double kFixedPointNeighbourhood = 0.5;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Value on the base strip, continued asymptotically above |Im| = A - 1.
cplx core_value(const TetrationTable& table, cplx w) {
    if (std::abs(w.imag()) <= table.height() - 1.0) return evaluate_strip(table, w);
    return table.representation().asymptotic(w);
}

std::optional<cplx> newton_from(const detail::StripRepresentation& rep, double height, cplx z, cplx w) {
    for (int it = 0; it < 40; ++it) {
        cplx step = (rep.value(w) - z) / rep.derivative(w);
        if (!finite(step)) return std::nullopt;
        if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step);
        w -= step;
        if (std::abs(w.real()) > 0.9 || std::abs(w.imag()) > height - 0.5) return std::nullopt;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(w))) break;
    }
    if (std::abs(rep.value(w) - z) > 1e-10 * (1.0 + std::abs(z))) return std::nullopt;
    if (std::abs(w.real()) > 0.5 + 1e-12 || std::abs(w.imag()) > height - 1.0 + 1e-12) return std::nullopt;
    return w;
}

// Preimage with |Re w| <= 1/2 and |Im w| <= A - 1 by seeded Newton.
std::optional<cplx> strip_preimage(const TetrationTable& table, cplx z) {
    const auto& rep = table.representation();
    const auto& seeds = rep.seeds();
    const double reach = 2.0 * detail::StripRepresentation::seed_spacing();
    std::vector<std::pair<double, std::size_t>> near;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        double d = std::abs(seeds[i].value - z);
        if (d <= reach * seeds[i].slope) near.emplace_back(d, i);
    }
    std::sort(near.begin(), near.end());
    const std::size_t tries = std::min<std::size_t>(near.size(), kMaxSeeds);
    for (std::size_t t = 0; t < tries; ++t) {
        if (auto w = newton_from(rep, table.height(), z, seeds[near[t].second].w)) return w;
    }
    return std::nullopt;
}

// Preimage in the asymptotic zone Im w >= A - 3/2 (mirrored below the axis).
std::optional<cplx> asymptotic_preimage(const TetrationTable& table, cplx z) {
    const auto& rep = table.representation();
    if (!rep.has_phase()) return std::nullopt;
    const cplx L = table.fixed_point().L;
    const bool upper = std::abs(z - L) < kFixedPointNeighbourhood;
    const bool lower = std::abs(z - std::conj(L)) < kFixedPointNeighbourhood;
    if (!upper && !lower) return std::nullopt;
    const cplx target = upper ? z : std::conj(z);
    const auto& k = rep.koenigs();
    cplx x;
    try {
        x = k.chi(target);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (x == cplx{}) throw Error(ErrorCode::AtFixedPoint, "slog is singular at the fixed point");
    const cplx period = cplx{0.0, 2.0 * std::numbers::pi} / k.log_c();
    cplx s = rep.phase() + std::log(x) / k.log_c();
    s += std::ceil((-0.5 - s.real()) / period.real()) * period;
    if (s.real() >= 0.5 || s.imag() < table.height() - kAsymptoticMargin) return std::nullopt;
    return upper ? s : std::conj(s);
}

// Principal side of the line through -2 along -1/ln c (mirrored below the real axis).
// Along that direction slog runs off towards L, so the line bounds one quasi-period.
bool principal_side(const TetrationTable& table, cplx w) {
    const cplx d = -1.0 / table.representation().koenigs().log_c();
    const cplx u = (w.imag() >= 0 ? w : std::conj(w)) + 2.0;
    return u.real() * d.imag() - u.imag() * d.real() > 0;
}

std::optional<cplx> core_preimage(const TetrationTable& table, cplx z) {
    if (auto s = asymptotic_preimage(table, z)) return s;
    return strip_preimage(table, z);
}

}  // namespace

bool in_domain_c2(cplx z) { return !(z.imag() == 0.0 && z.real() <= -2.0); }

namespace detail {

cplx sexp_extended(const TetrationTable& table, cplx z, const BranchPolicy& policy) {
    if (!finite(z)) throw Error(ErrorCode::OutsideDomain, "argument is not finite");
    if (!in_domain_c2(z)) throw Error(ErrorCode::OutsideDomain, "sexp is undefined on the real ray x <= -2");
    const Base& b = table.base();
    const double k = std::round(z.real());
    if (-k > policy.max_descents)
        throw Error(ErrorCode::DomainClipped, "descent count exceeds the branch policy budget");
    cplx v = core_value(table, cplx{z.real() - k, z.imag()});
    // Conjugation symmetry makes the strip value real on the real axis.
    if (z.imag() == 0.0) v = v.real();
    for (int i = 0; i < k; ++i) {
        v = exp_b(b, v);
        if (!finite(v) || std::abs(v) > kOverflowMagnitude)
            throw Error(ErrorCode::Overflow, "sexp exceeds magnitude 1e300");
    }
    for (int i = 0; i < -k; ++i) {
        const bool crosses = v.real() < 0 && ((z.imag() > 0 && v.imag() < 0) || (z.imag() < 0 && v.imag() > 0));
        if (crosses || v == cplx{})
            throw Error(ErrorCode::BranchViolation, "principal log_b descent would cross the cut");
        v = log_b(b, v);
    }
    return v;
}

}  // namespace detail

cplx sexp(const TetrationTable& table, cplx z, const BranchPolicy& policy) {
    if (!in_domain_c2(z)) throw Error(ErrorCode::OutsideDomain, "sexp is undefined on the real ray x <= -2");
    if (std::abs(z.imag()) > table.height() - 1.0)
        throw Error(ErrorCode::DomainClipped, "|Im z| exceeds A - 1 for this table");
    return detail::sexp_extended(table, z, policy);
}

cplx slog(const TetrationTable& table, cplx z, const BranchPolicy& policy) {
    if (!finite(z)) throw Error(ErrorCode::OutsideDomain, "argument is not finite");
    const auto& fp = table.fixed_point();
    if (z == fp.L || z == fp.L_conj) throw Error(ErrorCode::AtFixedPoint, "slog is singular at L and L*");
    if (z == cplx{1.0, 0.0}) return 0.0;
    const Base& b = table.base();

    std::optional<cplx> best;
    auto consider = [&](cplx s, int j) {
        cplx w = s + double(j);
        if (!principal_side(table, w)) return;
        try {
            cplx back = detail::sexp_extended(table, w, policy);
            if (std::abs(back - z) > 1e-9 * (1.0 + std::abs(z))) return;
        } catch (const Error&) {
            return;
        }
        if (!best || std::abs(w.imag()) < std::abs(best->imag()) - 1e-9 ||
            (std::abs(std::abs(w.imag()) - std::abs(best->imag())) <= 1e-9 && w.real() < best->real()))
            best = w;
    };

    cplx up = z;
    for (int j = 1; j <= kMaxAscents; ++j) {
        up = exp_b(b, up);
        if (!finite(up) || std::abs(up) > kOverflowMagnitude) break;
        if (auto s = core_preimage(table, up)) consider(*s, -j);
    }

    cplx down = z;
    int last = policy.max_descents;
    for (int j = 0; j <= last; ++j) {
        if (j > 0) {
            if (down == cplx{}) break;
            down = log_b(b, down);
        }
        if (auto s = core_preimage(table, down)) {
            consider(*s, j);
            last = std::min(last, j + kExtraDescents);
        }
    }
    if (!best) throw Error(ErrorCode::NoConvergence, "no sexp preimage found for slog");
    // Real arguments have a real preimage on (-2, inf); drop the quadrature noise.
    if (z.imag() == 0.0 && std::abs(best->imag()) < 1e-9) return best->real();
    return *best;
}

cplx iterate(const TetrationTable& table, cplx c, cplx z) {
    cplx w = c + slog(table, z);
    if (!in_domain_c2(w)) throw Error(ErrorCode::BranchViolation, "c + slog(z) lies on the cut of C_{-2}");
    return sexp(table, w);
}

std::vector<IterateSample> emit_iterate_family(const TetrationTable& table,
                                               const std::vector<double>& c_list, double x_min,
                                               double x_max, int n_points) {
    std::vector<IterateSample> rows;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double c : c_list) {
        for (int i = 0; i < n_points; ++i) {
            double x = n_points == 1 ? x_min : x_min + (x_max - x_min) * i / (n_points - 1);
            double y = nan;
            try {
                cplx v = iterate(table, c, x);
                if (std::abs(v.imag()) <= 1e-9 * (1.0 + std::abs(v.real()))) y = v.real();
            } catch (const Error&) {
            }
            rows.push_back(IterateSample{c, x, y});
        }
    }
    return rows;
}

}  // namespace tetra
