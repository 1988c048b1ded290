#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "geoscale/errors.hpp"

namespace geoscale {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(Point2D a, Point2D b) { return a.x == b.x && a.y == b.y; }
inline Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
inline Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
inline Point2D operator*(Point2D p, double s) { return {p.x * s, p.y * s}; }

inline double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2D a, Point2D b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2D p) { return std::sqrt(p.x * p.x + p.y * p.y); }
inline double distance(Point2D a, Point2D b) { return norm(b - a); }
inline bool is_finite(Point2D p) { return std::isfinite(p.x) && std::isfinite(p.y); }

constexpr double kPi = 3.14159265358979323846;
inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

struct BoundingBox {
    Point2D min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point2D max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

    void expand(Point2D p) {
        min.x = std::min(min.x, p.x);
        min.y = std::min(min.y, p.y);
        max.x = std::max(max.x, p.x);
        max.y = std::max(max.y, p.y);
    }
    void expand(const BoundingBox& other) {
        expand(other.min);
        expand(other.max);
    }
    bool empty() const { return min.x > max.x; }
    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    double diagonal() const { return empty() ? 0.0 : distance(min, max); }
};

inline BoundingBox bounds(const std::vector<Point2D>& pts) {
    BoundingBox b;
    for (Point2D p : pts) b.expand(p);
    return b;
}

/// Open chain of vertices in planar Cartesian coordinates.
struct Polyline {
    std::vector<Point2D> vertices;
};

/// Simple polygon: closed exterior ring (first == last vertex) plus
/// optional hole rings. Exterior is kept counterclockwise, holes clockwise.
struct Polygon {
    std::vector<Point2D> exterior;
    std::vector<std::vector<Point2D>> holes;
};

inline BoundingBox bounds(const Polyline& p) { return bounds(p.vertices); }
inline BoundingBox bounds(const Polygon& p) { return bounds(p.exterior); }

/// Signed shoelace area of a ring (closed or open vertex list; the closing
/// edge is implied). Positive for counterclockwise orientation.
inline double ring_signed_area(const std::vector<Point2D>& ring) {
    if (ring.size() < 3) return 0.0;
    const Point2D origin = ring.front();
    double twice = 0.0;
    for (std::size_t i = 1; i + 1 < ring.size(); ++i)
        twice += cross(ring[i] - origin, ring[i + 1] - origin);
    return 0.5 * twice;
}

/// Default vertex-identity tolerance: 1e-9 of the bounding-box diagonal.
inline double default_snap_tolerance(const BoundingBox& box) {
    return 1e-9 * box.diagonal();
}

inline double polyline_length(const Polyline& p) {
    if (p.vertices.size() < 2) throw std::invalid_argument("polyline needs at least 2 vertices");
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
        if (!is_finite(p.vertices[i])) throw std::invalid_argument("polyline has non-finite vertex");
        len += distance(p.vertices[i], p.vertices[i + 1]);
    }
    if (!is_finite(p.vertices.back())) throw std::invalid_argument("polyline has non-finite vertex");
    if (!(len > 0.0)) throw std::invalid_argument("polyline has zero length");
    return len;
}

/// Throws if the polyline breaks its invariants (finite vertices, no
/// consecutive duplicates within `snap_tol`, positive length). A negative
/// snap_tol selects the default bbox-relative tolerance.
inline void validate_polyline(const Polyline& p, double snap_tol = -1.0) {
    if (p.vertices.size() < 2) throw std::invalid_argument("polyline needs at least 2 vertices");
    for (Point2D v : p.vertices)
        if (!is_finite(v)) throw std::invalid_argument("polyline has non-finite vertex");
    if (snap_tol < 0.0) snap_tol = default_snap_tolerance(bounds(p));
    for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i)
        if (distance(p.vertices[i], p.vertices[i + 1]) <= snap_tol)
            throw std::invalid_argument("polyline has duplicate consecutive vertices");
}

/// Enforces ring closure and canonical orientation (exterior CCW, holes
/// CW). Inconsistent input orientation is corrected, not rejected.
inline void normalize_polygon(Polygon& poly) {
    auto check_ring = [](std::vector<Point2D>& ring) {
        if (ring.size() < 4) throw std::invalid_argument("polygon ring needs at least 4 positions");
        for (Point2D v : ring)
            if (!is_finite(v)) throw std::invalid_argument("polygon ring has non-finite vertex");
        if (!(ring.front() == ring.back()))
            throw std::invalid_argument("polygon ring is not closed (first != last)");
    };
    check_ring(poly.exterior);
    if (ring_signed_area(poly.exterior) < 0.0)
        std::reverse(poly.exterior.begin(), poly.exterior.end());
    for (auto& hole : poly.holes) {
        check_ring(hole);
        if (ring_signed_area(hole) > 0.0) std::reverse(hole.begin(), hole.end());
    }
}

/// Shoelace area of the exterior minus hole areas. Always positive;
/// degenerate (zero-area) exteriors are an error.
inline double polygon_area(const Polygon& poly) {
    double area = std::abs(ring_signed_area(poly.exterior));
    if (!(area > 0.0)) throw std::invalid_argument("degenerate polygon: exterior ring has zero area");
    for (const auto& hole : poly.holes) area -= std::abs(ring_signed_area(hole));
    if (!(area > 0.0)) throw std::invalid_argument("degenerate polygon: holes cover the exterior");
    return area;
}

/// Even-odd point-in-ring test. Points exactly on the boundary follow the
/// half-open crossing rule; callers that care use boundary tests instead.
inline bool point_in_ring(Point2D p, const std::vector<Point2D>& ring) {
    bool inside = false;
    const std::size_t n = ring.size();
    if (n < 3) return false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2D a = ring[j], b = ring[i];
        if ((b.y > p.y) != (a.y > p.y)) {
            const double x_cross = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

inline bool point_in_polygon(Point2D p, const Polygon& poly) {
    if (!point_in_ring(p, poly.exterior)) return false;
    for (const auto& hole : poly.holes)
        if (point_in_ring(p, hole)) return false;
    return true;
}

/// Result of intersecting two segments: zero, one, or two (collinear
/// overlap) points, with the parameter of each point on both segments.
struct SegmentIntersection {
    int count = 0;
    double t_first[2] = {0.0, 0.0};  // parameters on segment (a1,a2)
    double t_second[2] = {0.0, 0.0}; // parameters on segment (b1,b2)
};

/// Parametric segment-segment intersection including collinear overlap.
/// Endpoint touches count. Tolerance applies to the cross-product test.
inline SegmentIntersection intersect_segments(Point2D a1, Point2D a2, Point2D b1, Point2D b2,
                                              double eps = 1e-12) {
    SegmentIntersection out;
    const Point2D r = a2 - a1;
    const Point2D s = b2 - b1;
    const double rxs = cross(r, s);
    const double scale = std::max({norm(r), norm(s), 1e-300});
    if (std::abs(rxs) > eps * scale * scale) {
        const Point2D qp = b1 - a1;
        const double t = cross(qp, s) / rxs;
        const double u = cross(qp, r) / rxs;
        if (t >= -eps && t <= 1.0 + eps && u >= -eps && u <= 1.0 + eps) {
            out.count = 1;
            out.t_first[0] = std::clamp(t, 0.0, 1.0);
            out.t_second[0] = std::clamp(u, 0.0, 1.0);
        }
        return out;
    }
    // Parallel. Overlap only if collinear.
    const Point2D qp = b1 - a1;
    if (std::abs(cross(qp, r)) > eps * scale * scale) return out;
    const double rr = dot(r, r);
    if (rr <= 0.0) return out;
    double t0 = dot(qp, r) / rr;
    double t1 = dot(b2 - a1, r) / rr;
    if (t0 > t1) std::swap(t0, t1);
    const double lo = std::max(t0, 0.0);
    const double hi = std::min(t1, 1.0);
    if (lo > hi + eps) return out;
    auto param_on_b = [&](double t_on_a) {
        const Point2D p = a1 + r * t_on_a;
        const double ss = dot(s, s);
        return ss > 0.0 ? dot(p - b1, s) / ss : 0.0;
    };
    out.count = (hi - lo > eps) ? 2 : 1;
    out.t_first[0] = std::clamp(lo, 0.0, 1.0);
    out.t_second[0] = std::clamp(param_on_b(lo), 0.0, 1.0);
    if (out.count == 2) {
        out.t_first[1] = std::clamp(hi, 0.0, 1.0);
        out.t_second[1] = std::clamp(param_on_b(hi), 0.0, 1.0);
    }
    return out;
}

/// Distance from point to segment together with the projection parameter.
inline double point_segment_distance(Point2D p, Point2D a, Point2D b, double* t_out = nullptr) {
    const Point2D d = b - a;
    const double dd = dot(d, d);
    double t = dd > 0.0 ? dot(p - a, d) / dd : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    if (t_out) *t_out = t;
    return distance(p, a + d * t);
}

} // namespace geoscale
