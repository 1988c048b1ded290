#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "geoscale/errors.hpp"
#include "geoscale/geometry.hpp"

namespace geoscale {

/// Strictly decreasing positive measuring scales (yardsticks or box sizes).
struct ScaleSeries {
    std::vector<double> scales;
};

inline void validate_scales(const ScaleSeries& s) {
    if (s.scales.empty()) throw std::invalid_argument("scale series is empty");
    for (std::size_t i = 0; i < s.scales.size(); ++i) {
        if (!(s.scales[i] > 0.0) || !std::isfinite(s.scales[i]))
            throw std::invalid_argument("scales must be positive and finite");
        if (i > 0 && !(s.scales[i] < s.scales[i - 1]))
            throw std::invalid_argument("scales must be strictly decreasing");
    }
}

/// Ordinary least squares in log-log space plus the dimension derived from
/// the slope by the producing operation's convention.
struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double dimension = 0.0;
};

/// OLS on (log x, log y). The dimension field is left equal to the raw
/// slope; dimension-producing callers overwrite it with their convention.
inline LogLogFit loglog_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw numeric_error("log-log fit needs at least 2 points");
    std::vector<double> lx, ly;
    lx.reserve(points.size());
    ly.reserve(points.size());
    for (auto [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            throw std::invalid_argument("log-log fit requires positive finite coordinates");
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    const double n = static_cast<double>(points.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double dx = lx[i] - mx;
        const double dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // Relative threshold: identical x values make the slope undefined.
    if (sxx <= 1e-24 * n * std::max(1.0, mx * mx))
        throw numeric_error("log-log fit: zero variance in x (identical scales)");

    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy <= 0.0) {
        fit.r_squared = 1.0; // constant y is fit exactly by the zero-slope line
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
            ss_res += e * e;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    fit.dimension = fit.slope;
    return fit;
}

struct YardstickResult {
    std::size_t steps = 0;
    double measured_length = 0.0;
};

/// Divider walk: starting at the first vertex, repeatedly move to the
/// first point farther along the curve at chord distance exactly
/// `yardstick` (earliest circle-polyline intersection in arc-length
/// order). The final partial step enters as a straight-line remainder, so
/// straight polylines measure exactly at every yardstick.
inline YardstickResult yardstick_walk(const Polyline& p, double yardstick) {
    validate_polyline(p);
    if (!(yardstick > 0.0) || !std::isfinite(yardstick))
        throw std::invalid_argument("yardstick must be positive and finite");

    constexpr double kParamEps = 1e-9; // slack on the segment parameter
    const std::size_t nseg = p.vertices.size() - 1;
    std::size_t seg = 0;
    double t = 0.0;
    Point2D pos = p.vertices.front();
    std::size_t steps = 0;

    while (true) {
        bool advanced = false;
        for (std::size_t j = seg; j < nseg && !advanced; ++j) {
            const Point2D a = p.vertices[j];
            const Point2D d = p.vertices[j + 1] - a;
            const double lower = (j == seg) ? t : 0.0;
            const Point2D f = a - pos;
            const double qa = dot(d, d);
            if (qa <= 0.0) continue;
            const double qb = 2.0 * dot(f, d);
            const double qc = dot(f, f) - yardstick * yardstick;
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc < 0.0) continue;
            const double sq = std::sqrt(disc);
            for (double u : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
                if (u < lower - kParamEps || u > 1.0 + kParamEps) continue;
                u = std::clamp(u, lower, 1.0);
                if (j == seg && u <= t + kParamEps) continue; // no arc-length progress
                pos = a + d * u;
                seg = j;
                t = u;
                ++steps;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    const double remainder = distance(pos, p.vertices.back());
    return {steps, static_cast<double>(steps) * yardstick + remainder};
}

/// Richardson analysis: measured length against yardstick in log-log
/// space; fractal dimension D = 1 - slope.
inline LogLogFit divider_dimension(const Polyline& p, const ScaleSeries& scales) {
    validate_scales(scales);
    if (scales.scales.size() < 3)
        throw numeric_error("divider dimension needs at least 3 yardsticks");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(scales.scales.size());
    for (double s : scales.scales) pts.emplace_back(s, yardstick_walk(p, s).measured_length);
    LogLogFit fit = loglog_fit(pts);
    fit.dimension = 1.0 - fit.slope;
    return fit;
}

using Geometry = std::variant<Polyline, Polygon>;

namespace detail {

struct CellGrid {
    Point2D anchor;
    double size = 1.0;
    int nx = 0, ny = 0;
    std::vector<char> occupied;

    int clamp_index(double coord, double a, int n) const {
        const int i = static_cast<int>(std::floor((coord - a) / size));
        return std::clamp(i, 0, n - 1);
    }
    void mark(int ix, int iy) { occupied[static_cast<std::size_t>(iy) * nx + ix] = 1; }
    bool marked(int ix, int iy) const { return occupied[static_cast<std::size_t>(iy) * nx + ix] != 0; }
    std::size_t count() const {
        std::size_t c = 0;
        for (char v : occupied) c += (v != 0);
        return c;
    }
};

inline CellGrid make_cell_grid(const BoundingBox& box, double size, std::optional<Point2D> anchor) {
    CellGrid g;
    g.size = size;
    g.anchor = anchor.value_or(box.min);
    if (anchor) {
        // Snap an explicit anchor down so the grid still covers the geometry.
        g.anchor.x += std::floor((box.min.x - anchor->x) / size) * size;
        g.anchor.y += std::floor((box.min.y - anchor->y) / size) * size;
    }
    auto cells_for = [&](double extent) {
        const int n = static_cast<int>(std::ceil(extent / size - 1e-9));
        return std::max(n, 1);
    };
    g.nx = cells_for(box.max.x - g.anchor.x);
    g.ny = cells_for(box.max.y - g.anchor.y);
    g.occupied.assign(static_cast<std::size_t>(g.nx) * g.ny, 0);
    return g;
}

/// Marks every cell the segment passes through. Cells are half-open
/// ([low, high) on both axes): midpoints of the pieces between grid-line
/// crossings decide membership, which puts on-gridline runs in the cell
/// whose low edge they lie on.
inline void mark_segment(CellGrid& g, Point2D a, Point2D b) {
    std::vector<double> ts{0.0, 1.0};
    const Point2D d = b - a;
    auto add_axis_crossings = [&](double a0, double d0, double anchor0, int n) {
        if (d0 == 0.0) return;
        const int i_lo = static_cast<int>(std::floor((std::min(a0, a0 + d0) - anchor0) / g.size));
        const int i_hi = static_cast<int>(std::ceil((std::max(a0, a0 + d0) - anchor0) / g.size));
        for (int i = std::max(i_lo, 0); i <= std::min(i_hi, n); ++i) {
            const double coord = anchor0 + i * g.size;
            const double t = (coord - a0) / d0;
            if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
    };
    add_axis_crossings(a.x, d.x, g.anchor.x, g.nx);
    add_axis_crossings(a.y, d.y, g.anchor.y, g.ny);
    std::sort(ts.begin(), ts.end());
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (ts[i + 1] - ts[i] <= 1e-15) continue;
        const double tm = 0.5 * (ts[i] + ts[i + 1]);
        const Point2D m = a + d * tm;
        g.mark(g.clamp_index(m.x, g.anchor.x, g.nx), g.clamp_index(m.y, g.anchor.y, g.ny));
    }
    // Degenerate (point) segments still occupy their cell.
    if (dot(d, d) == 0.0)
        g.mark(g.clamp_index(a.x, g.anchor.x, g.nx), g.clamp_index(a.y, g.anchor.y, g.ny));
}

inline void mark_polyline(CellGrid& g, const std::vector<Point2D>& pts) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) mark_segment(g, pts[i], pts[i + 1]);
}

/// Fills cells whose center lies inside the polygon. Cells already marked
/// by the boundary pass are left alone; every other cell is uniformly
/// inside or outside, so the center test is exact for them.
inline void mark_polygon_interior(CellGrid& g, const Polygon& poly) {
    std::vector<const std::vector<Point2D>*> rings;
    rings.push_back(&poly.exterior);
    for (const auto& h : poly.holes) rings.push_back(&h);

    std::vector<double> xs;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double cy = g.anchor.y + (iy + 0.5) * g.size;
        xs.clear();
        for (const auto* ring : rings) {
            const auto& r = *ring;
            for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
                const Point2D p1 = r[j], p2 = r[i];
                if ((p2.y > cy) != (p1.y > cy))
                    xs.push_back(p2.x + (cy - p2.y) * (p1.x - p2.x) / (p1.y - p2.y));
            }
        }
        std::sort(xs.begin(), xs.end());
        // Even-odd fill between crossing pairs.
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            const int i0 = g.clamp_index(xs[k] + 0.5 * g.size, g.anchor.x + 0.5 * g.size, g.nx);
            for (int ix = i0; ix < g.nx; ++ix) {
                const double cx = g.anchor.x + (ix + 0.5) * g.size;
                if (cx < xs[k]) continue;
                if (cx >= xs[k + 1]) break;
                g.mark(ix, iy);
            }
        }
    }
}

inline CellGrid occupancy_grid(const Geometry& geom, double size, std::optional<Point2D> anchor) {
    const BoundingBox box =
        std::holds_alternative<Polyline>(geom) ? bounds(std::get<Polyline>(geom)) : bounds(std::get<Polygon>(geom));
    CellGrid g = make_cell_grid(box, size, anchor);
    if (std::holds_alternative<Polyline>(geom)) {
        mark_polyline(g, std::get<Polyline>(geom).vertices);
    } else {
        const Polygon& poly = std::get<Polygon>(geom);
        mark_polyline(g, poly.exterior);
        for (const auto& hole : poly.holes) mark_polyline(g, hole);
        mark_polygon_interior(g, poly);
    }
    return g;
}

} // namespace detail

/// Counts grid cells touched by the geometry (curves: cells the line
/// passes through; polygons: cells meeting the filled region). The grid is
/// anchored at the geometry's bounding-box lower-left unless an explicit
/// anchor is given for alignment-sensitivity studies.
inline std::vector<std::pair<double, std::size_t>> box_count(const Geometry& geom, const ScaleSeries& sizes,
                                                             std::optional<Point2D> anchor = std::nullopt) {
    validate_scales(sizes);
    if (std::holds_alternative<Polyline>(geom)) validate_polyline(std::get<Polyline>(geom));
    else polygon_area(std::get<Polygon>(geom));
    std::vector<std::pair<double, std::size_t>> out;
    out.reserve(sizes.scales.size());
    for (double s : sizes.scales)
        out.emplace_back(s, detail::occupancy_grid(geom, s, anchor).count());
    return out;
}

/// Box-counting dimension: D = -slope of log(count) against log(size).
inline LogLogFit boxcount_dimension(const std::vector<std::pair<double, std::size_t>>& counts) {
    if (counts.size() < 3) throw numeric_error("box-count dimension needs at least 3 sizes");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(counts.size());
    for (auto [size, count] : counts) {
        if (count < 1) throw std::invalid_argument("box-count dimension requires occupied counts >= 1");
        pts.emplace_back(size, static_cast<double>(count));
    }
    LogLogFit fit = loglog_fit(pts);
    fit.dimension = -fit.slope;
    return fit;
}

/// Area of the touched-cell cover at each cell size: count * size^2. The
/// cover is a superset of the region, so every value is at least the
/// shoelace area and converges to it as cells shrink.
inline std::vector<std::pair<double, double>> rasterized_area(const Polygon& poly, const ScaleSeries& cell_sizes,
                                                              std::optional<Point2D> anchor = std::nullopt) {
    validate_scales(cell_sizes);
    polygon_area(poly);
    std::vector<std::pair<double, double>> out;
    out.reserve(cell_sizes.scales.size());
    for (double s : cell_sizes.scales) {
        const std::size_t count = detail::occupancy_grid(Geometry{poly}, s, anchor).count();
        out.emplace_back(s, static_cast<double>(count) * s * s);
    }
    return out;
}

} // namespace geoscale
