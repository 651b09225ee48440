#include "tetra/fixpoint.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tetra/errors.hpp"
#include "tetra/format.hpp"

namespace tetra {

namespace {

constexpr cplx kSeed{0.3, 1.3};
constexpr int kHomotopySteps = 16;
constexpr int kNewtonBudget = 100;

// Newton on exp(s z) - z with step halving when the residual grows.
bool newton_fixed_point(double s, cplx& z) {
    auto residual = [s](cplx v) { return std::exp(s * v) - v; };
    cplx f = residual(z);
    for (int it = 0; it < kNewtonBudget; ++it) {
        cplx ez = std::exp(s * z);
        cplx step = f / (s * ez - 1.0);
        cplx trial = z - step;
        cplx ft = residual(trial);
        for (int halve = 0; halve < 30 && !(std::abs(ft) <= std::abs(f)); ++halve) {
            step *= 0.5;
            trial = z - step;
            ft = residual(trial);
        }
        z = trial;
        f = ft;
        if (std::abs(step) < 1e-15 || std::abs(f) < 1e-14) {
            // One more plain step to settle the last bits.
            cplx extra = f / (s * std::exp(s * z) - 1.0);
            if (std::isfinite(extra.real()) && std::abs(residual(z - extra)) <= std::abs(f))
                z -= extra;
            return std::isfinite(z.real()) && std::isfinite(z.imag());
        }
    }
    return false;
}

}  // namespace

Base::Base(double b) : b_(b), log_b_(std::log(b)) {
    const double threshold = std::exp(1.0 / std::numbers::e);
    if (!std::isfinite(b) || !(b > threshold))
        throw Error(ErrorCode::BaseOutOfRange,
                    "base " + format_number(b) + " must exceed e^(1/e)");
}

Base validate_base(double b) { return Base(b); }

FixedPointData principal_fixed_point(const Base& b) {
    const double target = b.log();
    cplx z = kSeed;
    if (!newton_fixed_point(1.0, z))
        throw NoConvergenceError("fixed point seed iteration failed", std::abs(std::exp(z) - z));
    if (target != 1.0) {
        for (int k = 1; k <= kHomotopySteps; ++k) {
            double s = 1.0 + (target - 1.0) * k / kHomotopySteps;
            if (!newton_fixed_point(s, z))
                throw NoConvergenceError("fixed point homotopy failed", std::abs(std::exp(s * z) - z));
        }
    }
    if (z.imag() < 0) z = std::conj(z);
    const double res = std::abs(exp_b(b, z) - z);
    const double angle = z.imag() * target;
    if (!(res <= 1e-13) || !(angle > 0.0 && angle < std::numbers::pi))
        throw NoConvergenceError("fixed point residual too large", res);
    FixedPointData fp{b, z, std::conj(z), target * z, res};
    return fp;
}

cplx multiplier(const FixedPointData& fp) {
    cplx c = fp.b.log() * fp.L;
    if (std::abs(c - std::log(fp.L)) > 1e-12)
        throw Error(ErrorCode::EvaluationFailure, "multiplier formulas disagree");
    return c;
}

}  // namespace tetra
