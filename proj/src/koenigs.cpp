#include "tetra/koenigs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tetra/errors.hpp"

namespace tetra {

namespace {

constexpr int kSeriesTerms = 40;
constexpr double kOverflowMagnitude = 1e150;
constexpr int kMaxScalings = 5000;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

KoenigsContext::KoenigsContext(const FixedPointData& fp, bool conjugate, int depth)
    : fp_(fp), conjugate_(conjugate), depth_(depth) {
    if (depth_ < 0) throw Error(ErrorCode::InvalidArgument, "Koenigs depth must be positive");
    const double lam = fp_.b.log();
    L_ = conjugate_ ? fp_.L_conj : fp_.L;
    c_ = lam * L_;
    log_c_ = std::log(c_);
    // Weakly repelling fixed points need longer log chains.
    if (depth_ == 0) depth_ = std::max(kDefaultDepth, static_cast<int>(std::ceil(12.0 / log_c_.real())));

    q_.assign(kSeriesTerms + 1, cplx{});
    std::vector<cplx> e(kSeriesTerms + 1, cplx{});
    q_[1] = 1.0;
    e[0] = 1.0;
    e[1] = lam;
    cplx ck = c_;
    for (int k = 2; k <= kSeriesTerms; ++k) {
        ck *= c_;
        cplx acc{};
        for (int j = 1; j < k; ++j) acc += double(j) * q_[j] * e[k - j];
        cplx r = lam * acc / double(k);
        q_[k] = L_ * r / (ck - c_);
        e[k] = r + lam * q_[k];
    }

    series_radius_ = 0.5;
    for (int k = 30; k <= kSeriesTerms; ++k) {
        double a = std::abs(q_[k]);
        if (a > 0) series_radius_ = std::min(series_radius_, std::pow(1e-17 / a, 1.0 / k));
    }
    capture_radius_ = 0.2 * series_radius_;

}

cplx KoenigsContext::tracked_log(cplx z, int* offset) const {
    const double lam = fp_.b.log();
    cplx v = std::log(z) / lam;
    const cplx period{0.0, 2.0 * std::numbers::pi / lam};
    int k = static_cast<int>(std::lround(((L_ - v) / period).real()));
    if (offset) *offset = k;
    return v + double(k) * period;
}

cplx KoenigsContext::series(cplx w) const {
    cplx r{};
    for (int k = kSeriesTerms; k >= 1; --k) r = r * w + q_[k];
    return r * w;
}

cplx KoenigsContext::series_derivative(cplx w) const {
    cplx r{};
    for (int k = kSeriesTerms; k >= 1; --k) r = r * w + double(k) * q_[k];
    return r;
}

cplx KoenigsContext::invert_series(cplx d) const {
    cplx w = d;
    for (int it = 0; it < 60; ++it) {
        cplx step = (series(w) - d) / series_derivative(w);
        w -= step;
        if (std::abs(step) <= 1e-17 + 1e-16 * std::abs(w)) return w;
    }
    throw Error(ErrorCode::EvaluationFailure, "series inversion did not converge");
}

ChiTrace KoenigsContext::chi_impl(cplx z, int extra_steps) const {
    ChiTrace trace;
    int remaining_extra = extra_steps;
    while (true) {
        if (!finite(z) || z == cplx{})
            throw Error(ErrorCode::BasinEscape, "log chain left the basin of the fixed point");
        if (std::abs(z - L_) <= capture_radius_) {
            if (remaining_extra == 0) break;
            --remaining_extra;
        } else if (trace.steps >= depth_) {
            throw Error(ErrorCode::DepthInsufficient,
                        "log chain did not reach the fixed point within the depth budget");
        }
        int k = 0;
        z = tracked_log(z, &k);
        trace.branch_offsets.push_back(k);
        ++trace.steps;
    }
    cplx w = invert_series(z - L_);
    for (int i = 0; i < trace.steps; ++i) w *= c_;
    trace.value = w;
    return trace;
}

ChiTrace KoenigsContext::chi_traced(cplx z) const {
    ChiTrace a = chi_impl(z, 0);
    ChiTrace b = chi_impl(z, 1);
    if (std::abs(a.value - b.value) > 1e-12 * std::max(1.0, std::abs(a.value)))
        throw Error(ErrorCode::DepthInsufficient, "successive truncations of chi disagree");
    return a;
}

cplx KoenigsContext::chi(cplx z) const { return chi_traced(z).value; }

cplx KoenigsContext::chi_inverse(cplx w) const {
    if (!finite(w)) throw Error(ErrorCode::OverflowEscape, "non-finite argument");
    int n = 0;
    while (std::abs(w) > series_radius_) {
        w /= c_;
        if (++n > kMaxScalings) throw Error(ErrorCode::OverflowEscape, "argument too large");
    }
    cplx z = L_ + series(w);
    for (int i = 0; i < n; ++i) {
        if (std::abs(z) > kOverflowMagnitude)
            throw Error(ErrorCode::OverflowEscape, "forward iterates exceeded 1e150");
        z = exp_b(fp_.b, z);
    }
    if (!finite(z) || std::abs(z) > kOverflowMagnitude)
        throw Error(ErrorCode::OverflowEscape, "forward iterates exceeded 1e150");
    return z;
}

cplx KoenigsContext::regular_abel(cplx z) const {
    cplx x = chi(z);
    if (x == cplx{}) throw Error(ErrorCode::AtFixedPoint, "regular Abel function is singular at the fixed point");
    cplx ell_half{L_.real(), 0.5 * L_.imag()};
    const double ref = std::arg(chi(0.5 * (ell_half + exp_b(fp_.b, ell_half))));
    double a = std::remainder(std::arg(x) - ref, 2.0 * std::numbers::pi);
    cplx lx{std::log(std::abs(x)), ref + a};
    return lx / log_c_;
}

}  // namespace tetra
