#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tetra/errors.hpp"
#include "tetra/koenigs.hpp"

using namespace tetra;

namespace {

const FixedPointData& fp_e() {
    static const FixedPointData fp = principal_fixed_point(Base(std::numbers::e));
    return fp;
}

// c^n (log^n z - L) with 200 branch-tracked log steps at 60 digits (mpmath).
struct Frozen {
    double b;
    cplx z;
    cplx chi;
};
const Frozen kFrozen[] = {
    {std::numbers::e, {0.5, 0.0}, {-0.058156401222462160722, -2.2921513916901564047}},
    {std::numbers::e, {0.3, 0.4}, {-0.26428832669069990658, -1.2975719061034226728}},
    {std::numbers::e, {0.6, 1.2}, {0.31556880874234804363, -0.12723385131525704612}},
    {2.0, {0.5, 0.0}, {-1.4129825200399237858, -2.0798318114320696492}},
    {3.0, {0.2, 1.0}, {-0.048766047146027468103, -0.28662851165862770716}},
};

std::vector<cplx> disk_points(cplx center, double radius, int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> pts;
    for (int i = 0; i < n; ++i)
        pts.push_back(center + std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng)));
    return pts;
}

}  // namespace

TEST(Koenigs, ZeroAtFixedPoint) {
    KoenigsContext k(fp_e());
    EXPECT_EQ(k.chi(fp_e().L), cplx{});
    EXPECT_EQ(k.chi_inverse(cplx{}), fp_e().L);
}

TEST(Koenigs, LinearNearFixedPoint) {
    KoenigsContext k(fp_e());
    EXPECT_NEAR(std::abs(k.chi(fp_e().L + 1e-8) - 1e-8), 0.0, 1e-14);
}

TEST(Koenigs, MatchesHighPrecisionLogChain) {
    for (const auto& f : kFrozen) {
        KoenigsContext k(principal_fixed_point(Base(f.b)));
        EXPECT_NEAR(std::abs(k.chi(f.z) - f.chi), 0.0, 1e-12 * std::abs(f.chi)) << f.b << " " << f.z;
    }
}

TEST(Koenigs, SchroederEquationNearL) {
    for (double b : {std::numbers::e, 2.0}) {
        const auto fp = principal_fixed_point(Base(b));
        KoenigsContext k(fp);
        for (cplx z : disk_points(fp.L, 0.3, 100, 7)) {
            EXPECT_LE(std::abs(k.chi(exp_b(fp.b, z)) - k.c() * k.chi(z)), 1e-9) << z;
        }
    }
}

TEST(Koenigs, InverseRoundTrip) {
    KoenigsContext k(fp_e());
    for (cplx w : disk_points(0.0, 1.0, 100, 11)) EXPECT_LE(std::abs(k.chi(k.chi_inverse(w)) - w), 1e-8) << w;
    const cplx x = k.chi(0.5);
    EXPECT_LE(std::abs(k.chi_inverse(x) - 0.5), 1e-8);
    EXPECT_LE(std::abs(k.chi_inverse(k.c() * x) - std::exp(0.5)), 1e-8);
}

TEST(Koenigs, UnitDerivative) {
    KoenigsContext k(fp_e());
    const double h = 1e-5;
    const cplx L = fp_e().L;
    EXPECT_LE(std::abs((k.chi(L + h) - k.chi(L - h)) / (2 * h) - 1.0), 1e-6);
    for (double angle : {0.3, 1.9, 4.0}) {
        const cplx u = std::polar(1.0, angle);
        const cplx r4 = k.chi(L + 1e-4 * u) / 1e-4;
        const cplx r6 = k.chi(L + 1e-6 * u) / 1e-6;
        EXPECT_LE(std::abs(r6 - u), 1e-5);
        // Linear error term: the 1e-6 quotient is a hundred times closer.
        EXPECT_LE(std::abs(r6 - u), 0.02 * std::abs(r4 - u) + 1e-9);
    }
}

TEST(Koenigs, ConjugateContext) {
    KoenigsContext upper(fp_e());
    KoenigsContext lower(fp_e(), true);
    EXPECT_EQ(lower.L(), std::conj(upper.L()));
    for (cplx z : disk_points(fp_e().L, 0.4, 30, 3))
        EXPECT_LE(std::abs(lower.chi(std::conj(z)) - std::conj(upper.chi(z))), 1e-10);
}

TEST(Koenigs, RegularAbelIncrement) {
    KoenigsContext k(fp_e());
    EXPECT_NEAR(std::abs(k.regular_abel(std::exp(0.5)) - k.regular_abel(0.5) - 1.0), 0.0, 1e-8);
    for (cplx z : disk_points(fp_e().L, 0.3, 40, 5)) {
        cplx d = k.regular_abel(std::exp(z)) - k.regular_abel(z) - 1.0;
        // Equal modulo the sheet period 2 pi i / ln c.
        const cplx period = cplx{0.0, 2.0 * std::numbers::pi} / k.log_c();
        d -= std::round((d / period).real()) * period;
        EXPECT_LE(std::abs(d), 1e-8) << z;
    }
}

TEST(Koenigs, RegularAbelZeroWhereChiIsOne) {
    KoenigsContext k(fp_e());
    EXPECT_LE(std::abs(k.regular_abel(k.chi_inverse(1.0))), 1e-9);
}

TEST(Koenigs, RegularAbelAtFixedPoint) {
    KoenigsContext k(fp_e());
    try {
        k.regular_abel(fp_e().L);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AtFixedPoint);
    }
}

TEST(Koenigs, ChiAtOneLeavesBasin) {
    // log 1 = 0 and log 0 does not exist.
    KoenigsContext k(fp_e());
    try {
        k.chi(1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BasinEscape);
    }
}

TEST(Koenigs, ShallowDepthIsReported) {
    KoenigsContext k(fp_e(), false, 3);
    try {
        k.chi(cplx{5.0, 2.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DepthInsufficient);
    }
}

TEST(Koenigs, InverseOverflow) {
    KoenigsContext k(fp_e());
    try {
        k.chi_inverse(cplx{1e8, 0.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OverflowEscape);
    }
}

TEST(Koenigs, TraceRecordsBranches) {
    KoenigsContext k(fp_e());
    ChiTrace t = k.chi_traced(cplx{-1.0, 3.0});
    EXPECT_GT(t.steps, 0);
    EXPECT_EQ(static_cast<int>(t.branch_offsets.size()), t.steps);
    EXPECT_EQ(t.value, k.chi(cplx{-1.0, 3.0}));
}

TEST(Koenigs, SeriesSolvesFunctionalEquation) {
    KoenigsContext k(fp_e());
    for (cplx w : disk_points(0.0, 0.5 * k.series_radius(), 20, 9)) {
        cplx lhs = k.L() + k.series(k.c() * w);
        cplx rhs = std::exp(k.L() + k.series(w));
        EXPECT_LE(std::abs(lhs - rhs), 1e-13);
    }
}
