#include "tetra/geometry.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <utility>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

namespace tetra::geometry {

namespace {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

using Point = bg::model::d2::point_xy<double>;
using Segment = bg::model::segment<Point>;
using Box = bg::model::box<Point>;
using Entry = std::pair<Box, int>;
using Tree = bgi::rtree<Entry, bgi::rstar<16>>;

Point to_point(cplx z) { return Point{z.real(), z.imag()}; }

Segment segment(const std::vector<cplx>& poly, int i) {
    return Segment{to_point(poly[i]), to_point(poly[i + 1])};
}

Box inflated_box(cplx a, cplx b, double tol) {
    return Box{Point{std::min(a.real(), b.real()) - tol, std::min(a.imag(), b.imag()) - tol},
               Point{std::max(a.real(), b.real()) + tol, std::max(a.imag(), b.imag()) + tol}};
}

Tree build_tree(const std::vector<cplx>& poly, double tol) {
    std::vector<Entry> entries;
    for (int i = 0; i + 1 < static_cast<int>(poly.size()); ++i)
        entries.emplace_back(inflated_box(poly[i], poly[i + 1], tol), i);
    return Tree(entries.begin(), entries.end());
}

void sort_contacts(std::vector<SegmentContact>& contacts) {
    std::sort(contacts.begin(), contacts.end(), [](const SegmentContact& x, const SegmentContact& y) {
        return std::pair(x.first, x.second) < std::pair(y.first, y.second);
    });
}

}  // namespace

double point_segment_distance(cplx p, cplx a, cplx b) {
    return bg::distance(to_point(p), Segment{to_point(a), to_point(b)});
}

double segment_distance(cplx a0, cplx a1, cplx b0, cplx b1) {
    return bg::distance(Segment{to_point(a0), to_point(a1)}, Segment{to_point(b0), to_point(b1)});
}

std::vector<SegmentContact> self_contacts(const std::vector<cplx>& poly, double tol) {
    std::vector<SegmentContact> contacts;
    const int n = static_cast<int>(poly.size()) - 1;
    if (n < 1) return contacts;
    for (int i = 0; i < n; ++i) {
        if (std::abs(poly[i + 1] - poly[i]) <= tol) contacts.push_back({i, i, 0.0});
    }
    for (int i = 0; i + 1 < n; ++i) {
        // Adjacent segments meet at poly[i+1]; they only overlap by folding back.
        if (std::abs(poly[i + 1] - poly[i]) <= tol || std::abs(poly[i + 2] - poly[i + 1]) <= tol) continue;
        double d = std::min(point_segment_distance(poly[i], poly[i + 1], poly[i + 2]),
                            point_segment_distance(poly[i + 2], poly[i], poly[i + 1]));
        if (d <= tol) contacts.push_back({i, i + 1, d});
    }
    // last[k]: end of the run of points repeating poly[k]; segments separated only by
    // such a run share an endpoint and are already reported above.
    std::vector<int> last(poly.size());
    for (int k = n; k >= 0; --k)
        last[k] = (k < n && std::abs(poly[k + 1] - poly[k]) <= tol) ? last[k + 1] : k;
    Tree tree = build_tree(poly, tol);
    std::vector<Entry> hits;
    for (int i = 0; i < n; ++i) {
        hits.clear();
        tree.query(bgi::intersects(inflated_box(poly[i], poly[i + 1], 0.0)), std::back_inserter(hits));
        for (const auto& [box, j] : hits) {
            if (j <= last[i + 1]) continue;
            double d = bg::distance(segment(poly, i), segment(poly, j));
            if (d <= tol) contacts.push_back({i, j, d});
        }
    }
    sort_contacts(contacts);
    return contacts;
}

std::vector<SegmentContact> cross_contacts(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                           double tol) {
    std::vector<SegmentContact> contacts;
    if (a.size() < 2 || b.size() < 2) return contacts;
    Tree tree = build_tree(b, tol);
    std::vector<Entry> hits;
    for (int i = 0; i + 1 < static_cast<int>(a.size()); ++i) {
        hits.clear();
        tree.query(bgi::intersects(inflated_box(a[i], a[i + 1], 0.0)), std::back_inserter(hits));
        for (const auto& [box, j] : hits) {
            double d = bg::distance(segment(a, i), segment(b, j));
            if (d <= tol) contacts.push_back({i, j, d});
        }
    }
    sort_contacts(contacts);
    return contacts;
}

double polyline_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        Segment s = segment(a, static_cast<int>(i));
        for (std::size_t j = 0; j + 1 < b.size(); ++j)
            best = std::min(best, bg::distance(s, segment(b, static_cast<int>(j))));
    }
    return best;
}

}  // namespace tetra::geometry
