#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "geoscale/errors.hpp"
#include "geoscale/geometry.hpp"
#include "geoscale/series.hpp"

namespace geoscale {

/// Triadic Koch construction: each segment is divided in three and the
/// middle third replaced by two sides of an equilateral triangle.
struct KochSpec {
    int iterations = 0;
    double unit = 1.0;
};

constexpr int kMaxKochIterations = 12; // 4^13 + 1 vertices would not fit in memory

inline void validate_koch(const KochSpec& spec) {
    if (spec.iterations < 0) throw std::invalid_argument("koch iterations must be >= 0");
    if (spec.iterations > kMaxKochIterations)
        throw resource_error("koch iterations capped at " + std::to_string(kMaxKochIterations) +
                             " (vertex count grows as 4^n + 1)");
    if (!(spec.unit > 0.0) || !std::isfinite(spec.unit))
        throw std::invalid_argument("koch unit length must be positive and finite");
}

/// Curve from (0,0) to (unit,0) with 4^n segments of length unit/3^n each;
/// total length unit * (4/3)^n.
inline Polyline koch_curve(const KochSpec& spec) {
    validate_koch(spec);
    std::vector<Point2D> pts{{0.0, 0.0}, {spec.unit, 0.0}};
    const double apex_height = std::sqrt(3.0) / 6.0;
    for (int it = 0; it < spec.iterations; ++it) {
        std::vector<Point2D> next;
        next.reserve((pts.size() - 1) * 4 + 1);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const Point2D a = pts[i];
            const Point2D d = pts[i + 1] - a;
            const Point2D perp{-d.y, d.x};
            next.push_back(a);
            next.push_back(a + d * (1.0 / 3.0));
            next.push_back(a + d * 0.5 + perp * apex_height);
            next.push_back(a + d * (2.0 / 3.0));
        }
        next.push_back(pts.back());
        pts = std::move(next);
    }
    return Polyline{std::move(pts)};
}

/// The recursive decomposition of the iteration-n curve: 4^k segments of
/// length unit/3^k for every k in 0..n, (4^(n+1) - 1) / 3 values in total.
inline ValueSeries koch_recursive_segments(const KochSpec& spec) {
    validate_koch(spec);
    ValueSeries s;
    s.label = "koch-segments";
    std::size_t count = 1;
    double length = spec.unit;
    for (int k = 0; k <= spec.iterations; ++k) {
        for (std::size_t i = 0; i < count; ++i) s.values.push_back(length);
        count *= 4;
        length /= 3.0;
    }
    return s;
}

} // namespace geoscale
