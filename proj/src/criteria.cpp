#include "tetra/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/random/sobol.hpp>

#include "tetra/errors.hpp"
#include "tetra/format.hpp"
#include "tetra/geometry.hpp"

namespace tetra {

namespace {

constexpr double kEndpointTolerance = 1e-10;
constexpr double kInjectivitySpread = 1e-10;
constexpr int kRegionGrid = 12;

std::string describe(const Error& e) {
    return "evaluation failed (" + std::string(error_code_name(e.code())) + "): " + e.what();
}

CriterionReport make_report(Criterion criterion) {
    CriterionReport report;
    report.criterion = criterion;
    return report;
}

std::string json_number(double x) { return std::isfinite(x) ? format_number(x) : "null"; }

void finish(CriterionReport& report) {
    std::stable_sort(report.witnesses.begin(), report.witnesses.end(),
                     [](const Witness& a, const Witness& b) { return a.index < b.index; });
    report.passed = report.witnesses.empty();
}

// alpha on every sample; failures become witnesses and are left out of the result.
SampledCurve evaluate_on(const AbelFunction& alpha, const SampledCurve& curve, std::vector<int>& index,
                         CriterionReport& report) {
    SampledCurve out;
    for (std::size_t k = 0; k < curve.z.size(); ++k) {
        try {
            cplx v = alpha(curve.z[k]);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw Error(ErrorCode::EvaluationFailure, "non-finite value");
            out.t.push_back(curve.t[k]);
            out.z.push_back(v);
            index.push_back(static_cast<int>(k));
        } catch (const Error& e) {
            report.witnesses.push_back({static_cast<int>(k), curve.z[k], describe(e)});
        }
    }
    return out;
}

void divergence_trend(const SampledCurve& zeta, const std::vector<int>& index, double threshold,
                      CriterionReport& report) {
    const int n = static_cast<int>(zeta.z.size());
    const int m = std::min(kTrendSamples, n);
    for (int k = 0; k < m; ++k) {
        if (!(zeta.z[k].imag() < -threshold))
            report.witnesses.push_back({index[k], zeta.z[k],
                                        "Im = " + format_number(zeta.z[k].imag()) + " does not fall below threshold -" +
                                            format_number(threshold)});
    }
    for (int k = std::max(m, n - m); k < n; ++k) {
        if (!(zeta.z[k].imag() > threshold))
            report.witnesses.push_back({index[k], zeta.z[k],
                                        "Im = " + format_number(zeta.z[k].imag()) + " does not exceed threshold " +
                                            format_number(threshold)});
    }
}

void monotone_im(const SampledCurve& zeta, const std::vector<int>& index, CriterionReport& report) {
    for (std::size_t k = 1; k < zeta.z.size(); ++k) {
        double step = zeta.z[k].imag() - zeta.z[k - 1].imag();
        if (!(step > kOnCurveTolerance))
            report.witnesses.push_back({index[k], zeta.z[k],
                                        "Im increment " + format_number(step) + " is not positive"});
    }
}

void contact_witnesses(const std::vector<geometry::SegmentContact>& contacts, const std::vector<cplx>& poly,
                       const std::vector<int>& index, const std::string& what, CriterionReport& report) {
    for (const auto& c : contacts) {
        if (c.first == c.second) {
            report.witnesses.push_back({index[c.first + 1], poly[c.first + 1],
                                        what + " samples " + std::to_string(index[c.first]) + " and " +
                                            std::to_string(index[c.first + 1]) + " coincide"});
            continue;
        }
        report.witnesses.push_back({index[c.first], poly[c.first],
                                    what + " segments " + std::to_string(index[c.first]) + " and " +
                                        std::to_string(index[c.second]) + " at distance " +
                                        format_number(c.distance)});
    }
}

CriterionReport criterion_B_impl(const SampledCurve& zeta, const std::vector<int>& index, double threshold,
                                 CriterionReport report) {
    report.threshold = threshold;
    contact_witnesses(geometry::self_contacts(zeta.z, kContactTolerance), zeta.z, index, "zeta", report);
    std::vector<cplx> shifted(zeta.z);
    for (auto& z : shifted) z += 1.0;
    for (const auto& c : geometry::cross_contacts(zeta.z, shifted, kContactTolerance)) {
        report.witnesses.push_back({index[c.first], zeta.z[c.first],
                                    "zeta segment " + std::to_string(index[c.first]) + " within " +
                                        format_number(c.distance) + " of zeta+1 segment " +
                                        std::to_string(index[c.second])});
    }
    divergence_trend(zeta, index, threshold, report);
    finish(report);
    return report;
}

std::vector<int> identity_index(std::size_t n) {
    std::vector<int> index(n);
    for (std::size_t k = 0; k < n; ++k) index[k] = static_cast<int>(k);
    return index;
}

}  // namespace

bool InitialRegionH::contains(cplx z) const {
    if (z == fp.L || z == fp.L_conj) return false;
    return z.real() >= fp.L.real() && std::abs(z) <= std::abs(fp.L);
}

SampledCurve curve_ell(const FixedPointData& fp, int n) {
    if (n < 16) throw Error(ErrorCode::InvalidArgument, "curve_ell needs at least 16 samples");
    SampledCurve curve;
    curve.endpoint_a = fp.L_conj;
    curve.endpoint_b = fp.L;
    const double reach = 1.0 - kEndpointGap;
    for (int k = 0; k < n; ++k) {
        double t = 2 * k == n - 1 ? 0.0 : -reach * std::cos(std::numbers::pi * k / (n - 1));
        curve.t.push_back(t);
        curve.z.emplace_back(fp.L.real(), fp.L.imag() * t);
    }
    return curve;
}

SampledCurve push_curve(const SampledCurve& curve, const Base& b) {
    SampledCurve out{curve.t, {}, exp_b(b, curve.endpoint_a), exp_b(b, curve.endpoint_b)};
    out.z.reserve(curve.z.size());
    for (cplx z : curve.z) out.z.push_back(exp_b(b, z));
    return out;
}

CriterionReport is_initial_curve(const SampledCurve& curve, const Base& b) {
    CriterionReport report = make_report(Criterion::InitialCurve);
    const int n = static_cast<int>(curve.z.size());
    report.sample_count = n;
    const auto index = identity_index(curve.z.size());
    const SampledCurve image = push_curve(curve, b);

    contact_witnesses(geometry::self_contacts(curve.z, kContactTolerance), curve.z, index, "gamma", report);
    contact_witnesses(geometry::self_contacts(image.z, kContactTolerance), image.z, index, "exp_b o gamma",
                      report);
    for (const auto& c : geometry::cross_contacts(curve.z, image.z, kContactTolerance)) {
        report.witnesses.push_back({c.first, curve.z[c.first],
                                    "gamma segment " + std::to_string(c.first) + " within " +
                                        format_number(c.distance) + " of exp_b o gamma segment " +
                                        std::to_string(c.second)});
    }
    if (std::abs(exp_b(b, curve.endpoint_a) - curve.endpoint_a) > kEndpointTolerance)
        report.witnesses.push_back({-1, curve.endpoint_a, "endpoint a is not a fixed point of exp_b"});
    if (std::abs(exp_b(b, curve.endpoint_b) - curve.endpoint_b) > kEndpointTolerance)
        report.witnesses.push_back({n, curve.endpoint_b, "endpoint b is not a fixed point of exp_b"});
    finish(report);
    return report;
}

Side classify_side(const SampledCurve& curve, cplx z) {
    const auto& p = curve.z;
    if (p.size() < 2) throw Error(ErrorCode::InvalidArgument, "curve needs at least two samples");
    const cplx first = p.front();
    const cplx last = p.back();
    if (!(last.imag() > first.imag()))
        throw Error(ErrorCode::InvalidArgument, "curve must rise in Im towards endpoint b");

    const double x = z.real();
    const double y = z.imag();
    double dist = y <= first.imag() ? std::abs(x - first.real()) : std::abs(z - first);
    dist = std::min(dist, y >= last.imag() ? std::abs(x - last.real()) : std::abs(z - last));
    for (std::size_t k = 0; k + 1 < p.size(); ++k)
        dist = std::min(dist, geometry::point_segment_distance(z, p[k], p[k + 1]));
    if (dist <= kOnCurveTolerance) return Side::OnCurve;

    int crossings = 0;
    // Vertical ray below the first sample and above the last one.
    if (first.imag() > y && first.real() < x) ++crossings;
    if (last.imag() <= y && last.real() < x) ++crossings;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        const cplx a = p[k];
        const cplx b = p[k + 1];
        if ((a.imag() > y) == (b.imag() > y)) continue;
        double xc = a.real() + (y - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
        if (xc < x) ++crossings;
    }
    return crossings % 2 == 0 ? Side::Left : Side::Right;
}

CriterionReport check_criterion_C(const AbelFunction& alpha, const SampledCurve& curve, double threshold) {
    CriterionReport report = make_report(Criterion::C);
    report.sample_count = static_cast<int>(curve.z.size());
    report.threshold = threshold;
    std::vector<int> index;
    const SampledCurve zeta = evaluate_on(alpha, curve, index, report);
    monotone_im(zeta, index, report);
    divergence_trend(zeta, index, threshold, report);
    finish(report);
    return report;
}

CriterionReport check_criterion_B(const AbelFunction& alpha, const SampledCurve& curve, double threshold) {
    CriterionReport report = make_report(Criterion::B);
    report.sample_count = static_cast<int>(curve.z.size());
    std::vector<int> index;
    const SampledCurve zeta = evaluate_on(alpha, curve, index, report);
    return criterion_B_impl(zeta, index, threshold, std::move(report));
}

CriterionReport check_criterion_B(const SampledCurve& zeta, double threshold) {
    CriterionReport report = make_report(Criterion::B);
    report.sample_count = static_cast<int>(zeta.z.size());
    return criterion_B_impl(zeta, identity_index(zeta.z.size()), threshold, std::move(report));
}

std::vector<cplx> window_probes(const Window& window, int samples) {
    boost::random::sobol gen(2);
    const double scale = 1.0 / (static_cast<double>(gen.max()) + 1.0);
    std::vector<cplx> probes;
    probes.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        double u = static_cast<double>(gen()) * scale;
        double v = static_cast<double>(gen()) * scale;
        probes.emplace_back(window.x0 + (window.x1 - window.x0) * u, window.y0 + (window.y1 - window.y0) * v);
    }
    return probes;
}

CriterionReport check_covering(const AbelFunction& alpha, const InitialRegionH& region, const Window& window,
                               int k_min, int k_max, int samples, int curve_samples) {
    CriterionReport report = make_report(Criterion::A);
    report.sample_count = samples;
    const FixedPointData& fp = region.fp;

    // Spot check of injectivity on a grid over H.
    std::vector<cplx> hz, hv;
    const double r = std::abs(fp.L);
    for (int i = 0; i < kRegionGrid; ++i) {
        for (int j = 0; j < kRegionGrid; ++j) {
            cplx z{fp.L.real() + (r - fp.L.real()) * (i + 0.5) / kRegionGrid, r * (2.0 * (j + 0.5) / kRegionGrid - 1.0)};
            if (!region.contains(z)) continue;
            try {
                hv.push_back(alpha(z));
                hz.push_back(z);
            } catch (const Error&) {
            }
        }
    }
    for (std::size_t i = 0; i < hv.size(); ++i) {
        for (std::size_t j = i + 1; j < hv.size(); ++j) {
            if (std::abs(hv[i] - hv[j]) <= kInjectivitySpread)
                report.witnesses.push_back({-1, hz[i], "alpha is not injective on H: same value at " +
                                                           format_number(hz[j].real()) + "," +
                                                           format_number(hz[j].imag())});
        }
    }

    const SampledCurve ell = curve_ell(fp, curve_samples);
    const SampledCurve arc = push_curve(ell, fp.b);
    CriterionReport boundary = make_report(Criterion::A);
    std::vector<int> left_index, right_index;
    const SampledCurve zeta = evaluate_on(alpha, ell, left_index, boundary);
    const SampledCurve zeta1 = evaluate_on(alpha, arc, right_index, boundary);
    if (!boundary.witnesses.empty() || zeta.z.size() < 2 || zeta1.z.size() < 2 ||
        !(zeta.z.back().imag() > zeta.z.front().imag()) || !(zeta1.z.back().imag() > zeta1.z.front().imag())) {
        for (auto& w : boundary.witnesses) {
            w.detail = "boundary sample: " + w.detail;
            report.witnesses.push_back(std::move(w));
        }
        report.witnesses.push_back({-1, fp.L, "boundary curves of alpha(H) are not usable for side classification"});
        finish(report);
        return report;
    }

    const auto probes = window_probes(window, samples);
    for (int i = 0; i < samples; ++i) {
        const cplx w = probes[i];
        bool covered = false;
        for (int k = k_min; k <= k_max && !covered; ++k) {
            const cplx u = w - double(k);
            covered = classify_side(zeta, u) != Side::Left && classify_side(zeta1, u) != Side::Right;
        }
        if (!covered)
            report.witnesses.push_back({i, w, "no translate with k in [" + std::to_string(k_min) + ", " +
                                                  std::to_string(k_max) + "] lies in alpha(H)"});
    }
    finish(report);
    return report;
}

AbelFunction szekeres_perturbation(AbelFunction alpha) {
    return [alpha = std::move(alpha)](cplx z) {
        cplx a = alpha(z);
        return a + std::sin(2.0 * std::numbers::pi * a) / (4.0 * std::numbers::pi);
    };
}

const char* criterion_name(Criterion c) {
    switch (c) {
        case Criterion::A: return "A";
        case Criterion::B: return "B";
        case Criterion::C: return "C";
        case Criterion::InitialCurve: return "initial";
    }
    return "?";
}

std::string report_to_json(const CriterionReport& report) {
    std::ostringstream os;
    os << "{\"criterion\":\"" << criterion_name(report.criterion) << "\",\"passed\":"
       << (report.passed ? "true" : "false") << ",\"sample_count\":" << report.sample_count
       << ",\"threshold\":" << json_number(report.threshold) << ",\"witnesses\":[";
    for (std::size_t i = 0; i < report.witnesses.size(); ++i) {
        const auto& w = report.witnesses[i];
        if (i) os << ",";
        os << "{\"index\":" << w.index << ",\"location\":[" << json_number(w.location.real()) << ","
           << json_number(w.location.imag()) << "],\"detail\":\"";
        for (char ch : w.detail) {
            if (ch == '"' || ch == '\\') os << '\\';
            os << ch;
        }
        os << "\"}";
    }
    os << "]}";
    return os.str();
}

}  // namespace tetra
