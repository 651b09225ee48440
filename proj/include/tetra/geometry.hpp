#pragma once

#include <vector>

#include "tetra/fixpoint.hpp"

namespace tetra::geometry {

double point_segment_distance(cplx p, cplx a, cplx b);
double segment_distance(cplx a0, cplx a1, cplx b0, cplx b1);

/// Pair of polyline segments (segment i joins points i and i+1).
struct SegmentContact {
    int first;
    int second;
    double distance;
};

/// Contacts that break injectivity of an open polyline: repeated consecutive
/// points, adjacent segments folding back onto each other, and non-adjacent
/// segments closer than tol. A repeated point i+1 == i is reported as {i, i}.
/// Sorted by (first, second).
std::vector<SegmentContact> self_contacts(const std::vector<cplx>& poly, double tol);

/// Segment pairs of two polylines closer than tol, sorted by (first, second).
std::vector<SegmentContact> cross_contacts(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                           double tol);

/// Minimum distance between two polylines.
double polyline_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace tetra::geometry
