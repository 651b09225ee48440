#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tetra/fixpoint.hpp"

namespace tetra {

/// Samples z_k = gamma(t_k) of a curve on (-1, 1) with its limits at t -> -1 and t -> 1.
struct SampledCurve {
    std::vector<double> t;
    std::vector<cplx> z;
    cplx endpoint_a;
    cplx endpoint_b;
};

/// H = {Re z >= Re L, |z| <= |L|} without L and L*.
struct InitialRegionH {
    FixedPointData fp;

    bool contains(cplx z) const;
};

enum class Criterion { A, B, C, InitialCurve };

struct Witness {
    int index;
    cplx location;
    std::string detail;
};

struct CriterionReport {
    Criterion criterion = Criterion::A;
    bool passed = true;
    std::vector<Witness> witnesses;  ///< sorted by index
    int sample_count = 0;
    double threshold = 0.0;  ///< |Im| level used by the divergence trend test (0 if unused)
};

/// Candidate Abel function of exp_b.
using AbelFunction = std::function<cplx(cplx)>;

enum class Side { Left, Right, OnCurve };

struct Window {
    double x0, x1, y0, y1;
};

inline constexpr double kContactTolerance = 1e-9;
inline constexpr double kOnCurveTolerance = 1e-12;
inline constexpr double kEndpointGap = 1e-4;
inline constexpr double kDefaultDivergenceThreshold = 3.0;
inline constexpr int kTrendSamples = 5;

/// Segment from L* to L, l(t) = Re L + i Im L t, at n Chebyshev-clustered t with |t| <= 1 - 1e-4.
SampledCurve curve_ell(const FixedPointData& fp, int n);

/// exp_b applied to every sample and both endpoints.
SampledCurve push_curve(const SampledCurve& curve, const Base& b);

/// Injectivity of gamma and exp_b o gamma, their disjointness and the fixed-point endpoints.
CriterionReport is_initial_curve(const SampledCurve& curve, const Base& b);

/// Leftward ray parity against the polyline extended vertically beyond its first and last samples.
Side classify_side(const SampledCurve& curve, cplx z);

/// Im alpha(gamma(t_k)) strictly increasing and beyond +-threshold on the last/first five samples.
CriterionReport check_criterion_C(const AbelFunction& alpha, const SampledCurve& curve,
                                  double threshold = kDefaultDivergenceThreshold);

/// zeta = alpha o gamma injective, disjoint from zeta + 1, with the divergence trend of C.
CriterionReport check_criterion_B(const AbelFunction& alpha, const SampledCurve& curve,
                                  double threshold = kDefaultDivergenceThreshold);

/// Same checks on an already sampled zeta.
CriterionReport check_criterion_B(const SampledCurve& zeta, double threshold = kDefaultDivergenceThreshold);

/// Every quasi-random window point w has some k in [k_min, k_max] with w - k in alpha(H),
/// decided as Right-of-zeta and Left-of-(zeta + 1) for zeta = alpha o l and zeta + 1 = alpha o b^l.
CriterionReport check_covering(const AbelFunction& alpha, const InitialRegionH& region, const Window& window,
                               int k_min, int k_max, int samples, int curve_samples = 400);

/// alpha + sin(2 pi alpha) / (4 pi).
AbelFunction szekeres_perturbation(AbelFunction alpha);

/// First `samples` points of the 2-D Sobol sequence mapped onto the window.
std::vector<cplx> window_probes(const Window& window, int samples);

const char* criterion_name(Criterion c);

/// {criterion, passed, sample_count, threshold, witnesses: [{index, location: [re, im], detail}]}.
std::string report_to_json(const CriterionReport& report);

}  // namespace tetra
