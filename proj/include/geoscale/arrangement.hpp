#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "geoscale/errors.hpp"
#include "geoscale/geometry.hpp"

namespace geoscale {

/// One input street segment: an open polyline with an optional name and a
/// stable identifier (used to derive noded-edge keys).
struct StreetSegment {
    Polyline geometry;
    std::string name;
    std::string id;
};

struct ArrangementNode {
    Point2D position;
    std::vector<int> outgoing; // half-edge ids sorted counterclockwise
    int component = -1;

    std::size_t degree() const { return outgoing.size(); }
};

/// Undirected edge between two junctions. Interior vertices are polyline
/// bends, not junctions. Half-edge 2*id runs a->b, 2*id+1 runs b->a.
struct ArrangementEdge {
    std::string key; // "<input id>#<piece ordinal>", stable across transforms
    int node_a = -1;
    int node_b = -1;
    std::vector<Point2D> geometry; // from node_a to node_b
    std::string name;
    double length = 0.0;
};

struct ArrangementFace {
    std::vector<int> half_edges;
    std::vector<Point2D> ring;
    double signed_area = 0.0;
    bool outer = false;
    int component = -1;
};

/// Fully noded street network: segments split at crossings, endpoints and
/// crossings within the snap tolerance merged into junctions. Immutable
/// once built; analyses may read it from any number of threads.
struct PlanarArrangement {
    std::vector<ArrangementNode> nodes;
    std::vector<ArrangementEdge> edges;
    std::vector<ArrangementFace> faces;
    std::vector<int> next_half; // successor half-edge around its face
    std::vector<int> face_of;   // face id per half-edge
    int component_count = 0;
    double snap_tolerance = 0.0;

    int origin(int h) const {
        const auto& e = edges[h >> 1];
        return (h & 1) == 0 ? e.node_a : e.node_b;
    }
    int target(int h) const {
        const auto& e = edges[h >> 1];
        return (h & 1) == 0 ? e.node_b : e.node_a;
    }
    static int twin(int h) { return h ^ 1; }
    static int edge_of(int h) { return h >> 1; }

    /// Unit direction leaving the origin node of half-edge h.
    Point2D direction_from_origin(int h) const {
        const auto& g = edges[h >> 1].geometry;
        const Point2D d = (h & 1) == 0 ? g[1] - g[0] : g[g.size() - 2] - g.back();
        const double n = norm(d);
        return {d.x / n, d.y / n};
    }

    /// Geometry of half-edge h in traversal direction.
    std::vector<Point2D> directed_geometry(int h) const {
        std::vector<Point2D> g = edges[h >> 1].geometry;
        if (h & 1) std::reverse(g.begin(), g.end());
        return g;
    }
};

namespace detail {

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

enum class PointKind : unsigned char { Bend = 0, Terminal = 1, Cut = 2 };

struct SubSegment {
    int input_index;   // which StreetSegment
    int vertex_index;  // position of its first vertex in that polyline
    Point2D a, b;
    std::vector<double> cuts; // interior split parameters
};

struct PieceEnd {
    Point2D point;
    PointKind kind;
};

struct Piece {
    int input_index;
    PieceEnd start, end;
    int node_start = -1, node_end = -1;
};

/// Clusters points within `tol` using a uniform hash grid plus union-find;
/// cluster position is the member centroid.
class PointSnapper {
public:
    explicit PointSnapper(double tol) : tol_(tol), cell_(tol > 0.0 ? tol : 1.0) {}

    int add(Point2D p) {
        points_.push_back(p);
        return static_cast<int>(points_.size()) - 1;
    }

    /// Returns (node index per added point, node positions).
    std::pair<std::vector<int>, std::vector<Point2D>> snap() const {
        const int n = static_cast<int>(points_.size());
        DisjointSets sets(n);
        std::unordered_map<long long, std::vector<int>> buckets;
        auto key_of = [&](double x, double y) {
            const long long ix = static_cast<long long>(std::floor(x / cell_));
            const long long iy = static_cast<long long>(std::floor(y / cell_));
            return ix * 73856093LL ^ iy * 19349663LL;
        };
        for (int i = 0; i < n; ++i) buckets[key_of(points_[i].x, points_[i].y)].push_back(i);
        for (int i = 0; i < n; ++i) {
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy) {
                    const auto it = buckets.find(key_of(points_[i].x + dx * cell_, points_[i].y + dy * cell_));
                    if (it == buckets.end()) continue;
                    for (int j : it->second)
                        if (j < i && distance(points_[i], points_[j]) <= tol_) sets.unite(i, j);
                }
        }
        std::vector<int> node_of(n, -1);
        std::vector<Point2D> centroids;
        std::vector<int> counts;
        std::map<int, int> root_to_node; // ordered for determinism
        for (int i = 0; i < n; ++i) {
            const int root = sets.find(i);
            auto [it, inserted] = root_to_node.emplace(root, static_cast<int>(centroids.size()));
            if (inserted) {
                centroids.push_back({0.0, 0.0});
                counts.push_back(0);
            }
            node_of[i] = it->second;
            centroids[it->second] = centroids[it->second] + points_[i];
            ++counts[it->second];
        }
        for (std::size_t k = 0; k < centroids.size(); ++k)
            centroids[k] = centroids[k] * (1.0 / counts[k]);
        return {std::move(node_of), std::move(centroids)};
    }

private:
    double tol_;
    double cell_;
    std::vector<Point2D> points_;
};

} // namespace detail

/// Builds the noded arrangement. A negative snap tolerance selects the
/// default 1e-9 x bounding-box diagonal. Throws when every input segment
/// is degenerate. Euler's formula (V - E + F = 2 per component, counting
/// the outer face) is verified during construction.
inline PlanarArrangement build_arrangement(const std::vector<StreetSegment>& segments,
                                           double snap_tolerance = -1.0) {
    using detail::Piece;
    using detail::PieceEnd;
    using detail::PointKind;
    using detail::SubSegment;

    if (segments.empty()) throw std::invalid_argument("arrangement needs at least one segment");

    BoundingBox box;
    for (const auto& s : segments)
        for (Point2D p : s.geometry.vertices) {
            if (!is_finite(p)) throw std::invalid_argument("street segment has non-finite vertex");
            box.expand(p);
        }
    const double tol = snap_tolerance >= 0.0 ? snap_tolerance : default_snap_tolerance(box);

    // 1. Primitive sub-segments, skipping collapsed pieces.
    std::vector<SubSegment> subs;
    for (int si = 0; si < static_cast<int>(segments.size()); ++si) {
        const auto& verts = segments[si].geometry.vertices;
        for (int k = 0; k + 1 < static_cast<int>(verts.size()); ++k)
            if (distance(verts[k], verts[k + 1]) > tol)
                subs.push_back({si, k, verts[k], verts[k + 1], {}});
    }
    if (subs.empty()) throw std::invalid_argument("all input segments are degenerate");

    // 2. Pairwise noding: exact crossings plus endpoints within tol of
    // another sub-segment's interior. Sweep over x-sorted bboxes.
    struct Entry {
        double xmin, xmax;
        int idx;
    };
    std::vector<Entry> order;
    order.reserve(subs.size());
    for (int i = 0; i < static_cast<int>(subs.size()); ++i)
        order.push_back({std::min(subs[i].a.x, subs[i].b.x) - tol,
                         std::max(subs[i].a.x, subs[i].b.x) + tol, i});
    std::sort(order.begin(), order.end(), [](const Entry& l, const Entry& r) { return l.xmin < r.xmin; });

    auto add_cut = [&](SubSegment& s, double t) {
        const double len = distance(s.a, s.b);
        const double eps = len > 0.0 ? tol / len : 0.0;
        if (t > eps && t < 1.0 - eps) s.cuts.push_back(t);
    };

    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
            if (order[oj].xmin > order[oi].xmax) break;
            SubSegment& s1 = subs[order[oi].idx];
            SubSegment& s2 = subs[order[oj].idx];
            const double ymin1 = std::min(s1.a.y, s1.b.y), ymax1 = std::max(s1.a.y, s1.b.y);
            const double ymin2 = std::min(s2.a.y, s2.b.y), ymax2 = std::max(s2.a.y, s2.b.y);
            if (ymin1 > ymax2 + tol || ymin2 > ymax1 + tol) continue;

            const auto hit = intersect_segments(s1.a, s1.b, s2.a, s2.b);
            for (int k = 0; k < hit.count; ++k) {
                add_cut(s1, hit.t_first[k]);
                add_cut(s2, hit.t_second[k]);
            }
            // Endpoint-on-interior within tolerance (snapped T-junctions).
            double tp;
            if (point_segment_distance(s1.a, s2.a, s2.b, &tp) <= tol) add_cut(s2, tp);
            if (point_segment_distance(s1.b, s2.a, s2.b, &tp) <= tol) add_cut(s2, tp);
            if (point_segment_distance(s2.a, s1.a, s1.b, &tp) <= tol) add_cut(s1, tp);
            if (point_segment_distance(s2.b, s1.a, s1.b, &tp) <= tol) add_cut(s1, tp);
        }
    }

    // 3. Pieces per input segment, in order along each polyline.
    std::vector<std::vector<Piece>> pieces_by_input(segments.size());
    for (auto& s : subs) {
        std::sort(s.cuts.begin(), s.cuts.end());
        s.cuts.erase(std::unique(s.cuts.begin(), s.cuts.end(),
                                 [&](double a, double b) { return b - a <= 1e-12; }),
                     s.cuts.end());
        const auto& verts = segments[s.input_index].geometry.vertices;
        const bool starts_polyline = s.vertex_index == 0;
        const bool ends_polyline = s.vertex_index + 2 == static_cast<int>(verts.size());
        const Point2D d = s.b - s.a;

        std::vector<PieceEnd> stops;
        stops.push_back({s.a, starts_polyline ? PointKind::Terminal : PointKind::Bend});
        for (double t : s.cuts) stops.push_back({s.a + d * t, PointKind::Cut});
        stops.push_back({s.b, ends_polyline ? PointKind::Terminal : PointKind::Bend});
        for (std::size_t k = 0; k + 1 < stops.size(); ++k)
            pieces_by_input[s.input_index].push_back({s.input_index, stops[k], stops[k + 1], -1, -1});
    }

    // 4. Snap piece endpoints into junction candidates.
    detail::PointSnapper snapper(tol);
    for (auto& vec : pieces_by_input)
        for (auto& p : vec) {
            (void)snapper.add(p.start.point);
            (void)snapper.add(p.end.point);
        }
    const auto [node_of_point, node_positions] = snapper.snap();

    std::size_t point_cursor = 0;
    for (auto& vec : pieces_by_input)
        for (auto& p : vec) {
            p.node_start = node_of_point[point_cursor++];
            p.node_end = node_of_point[point_cursor++];
        }

    // Node flags: terminal/cut endpoints and piece-degree decide junctions.
    std::vector<int> piece_degree(node_positions.size(), 0);
    std::vector<char> hard_junction(node_positions.size(), 0);
    for (const auto& vec : pieces_by_input)
        for (const auto& p : vec) {
            if (p.node_start == p.node_end && distance(p.start.point, p.end.point) <= tol)
                continue; // collapsed piece, dropped below as well
            ++piece_degree[p.node_start];
            ++piece_degree[p.node_end];
            if (p.start.kind != PointKind::Bend) hard_junction[p.node_start] = 1;
            if (p.end.kind != PointKind::Bend) hard_junction[p.node_end] = 1;
        }

    auto is_junction = [&](int node) { return hard_junction[node] || piece_degree[node] != 2; };

    // 5. Assemble edges: maximal piece chains between junctions, interior
    // bends kept as edge geometry.
    PlanarArrangement arr;
    arr.snap_tolerance = tol;
    arr.nodes.resize(node_positions.size());
    for (std::size_t i = 0; i < node_positions.size(); ++i) arr.nodes[i].position = node_positions[i];

    std::vector<char> node_used(node_positions.size(), 0);
    auto edge_exists = [&](const ArrangementEdge& e) {
        // Coincident duplicates (same junctions, same shape) collapse.
        for (const auto& other : arr.edges) {
            if (std::min(other.node_a, other.node_b) != std::min(e.node_a, e.node_b) ||
                std::max(other.node_a, other.node_b) != std::max(e.node_a, e.node_b))
                continue;
            if (other.geometry.size() != e.geometry.size()) continue;
            if (std::abs(other.length - e.length) > tol * 4.0) continue;
            const Point2D mid_a = other.geometry[other.geometry.size() / 2];
            const Point2D mid_f = e.geometry[e.geometry.size() / 2];
            const Point2D mid_r = e.geometry[(e.geometry.size() - 1) / 2];
            if (distance(mid_a, mid_f) <= tol * 4.0 || distance(mid_a, mid_r) <= tol * 4.0) return true;
        }
        return false;
    };

    for (int si = 0; si < static_cast<int>(segments.size()); ++si) {
        const auto& vec = pieces_by_input[si];
        int ordinal = 0;
        std::vector<Point2D> geom;
        int start_node = -1;
        for (const auto& p : vec) {
            const bool collapsed = p.node_start == p.node_end && distance(p.start.point, p.end.point) <= tol;
            if (collapsed) continue;
            if (geom.empty()) {
                start_node = p.node_start;
                geom.push_back(arr.nodes[p.node_start].position);
            }
            if (is_junction(p.node_end)) {
                geom.push_back(arr.nodes[p.node_end].position);
                ArrangementEdge e;
                e.node_a = start_node;
                e.node_b = p.node_end;
                e.geometry = std::move(geom);
                e.name = segments[si].name;
                e.key = (segments[si].id.empty() ? std::to_string(si) : segments[si].id) + "#" +
                        std::to_string(ordinal++);
                e.length = 0.0;
                for (std::size_t k = 0; k + 1 < e.geometry.size(); ++k)
                    e.length += distance(e.geometry[k], e.geometry[k + 1]);
                geom.clear();
                start_node = -1;
                if (e.node_a == e.node_b && e.length <= tol * 4.0) continue;
                if (edge_exists(e)) continue;
                node_used[e.node_a] = node_used[e.node_b] = 1;
                arr.edges.push_back(std::move(e));
            } else {
                geom.push_back(p.end.point); // interior bend keeps original coordinates
            }
        }
        if (!geom.empty())
            throw std::logic_error("arrangement: polyline did not terminate at a junction");
    }
    if (arr.edges.empty()) throw std::invalid_argument("all input segments are degenerate");

    // Compact away nodes that ended up unused (e.g. all-collapsed pieces).
    {
        std::vector<int> remap(arr.nodes.size(), -1);
        std::vector<ArrangementNode> kept;
        for (std::size_t i = 0; i < arr.nodes.size(); ++i)
            if (node_used[i]) {
                remap[i] = static_cast<int>(kept.size());
                kept.push_back(arr.nodes[i]);
            }
        for (auto& e : arr.edges) {
            e.node_a = remap[e.node_a];
            e.node_b = remap[e.node_b];
        }
        arr.nodes = std::move(kept);
    }

    // 6. Half-edge rotation order per node.
    for (int e = 0; e < static_cast<int>(arr.edges.size()); ++e) {
        arr.nodes[arr.edges[e].node_a].outgoing.push_back(2 * e);
        arr.nodes[arr.edges[e].node_b].outgoing.push_back(2 * e + 1);
    }
    for (auto& node : arr.nodes) {
        std::sort(node.outgoing.begin(), node.outgoing.end(), [&](int ha, int hb) {
            const Point2D da = arr.direction_from_origin(ha);
            const Point2D db = arr.direction_from_origin(hb);
            const double aa = std::atan2(da.y, da.x);
            const double ab = std::atan2(db.y, db.x);
            if (aa != ab) return aa < ab;
            return ha < hb;
        });
    }

    // next(h): the half-edge one step clockwise from twin(h) at the target
    // node. Interior faces then trace counterclockwise.
    arr.next_half.assign(arr.edges.size() * 2, -1);
    for (int h = 0; h < static_cast<int>(arr.next_half.size()); ++h) {
        const auto& out = arr.nodes[arr.target(h)].outgoing;
        const auto it = std::find(out.begin(), out.end(), PlanarArrangement::twin(h));
        const std::size_t pos = static_cast<std::size_t>(it - out.begin());
        arr.next_half[h] = out[(pos + out.size() - 1) % out.size()];
    }

    // 7. Faces by cycle tracing.
    arr.face_of.assign(arr.edges.size() * 2, -1);
    for (int h0 = 0; h0 < static_cast<int>(arr.face_of.size()); ++h0) {
        if (arr.face_of[h0] != -1) continue;
        ArrangementFace face;
        int h = h0;
        do {
            arr.face_of[h] = static_cast<int>(arr.faces.size());
            face.half_edges.push_back(h);
            auto g = arr.directed_geometry(h);
            face.ring.insert(face.ring.end(), g.begin(), g.end() - 1);
            h = arr.next_half[h];
        } while (h != h0);
        face.signed_area = ring_signed_area(face.ring);
        arr.faces.push_back(std::move(face));
    }

    // 8. Connected components over nodes.
    detail::DisjointSets comp(arr.nodes.size());
    for (const auto& e : arr.edges) comp.unite(e.node_a, e.node_b);
    std::map<int, int> root_to_component;
    for (std::size_t i = 0; i < arr.nodes.size(); ++i) {
        const int root = comp.find(static_cast<int>(i));
        auto [it, inserted] = root_to_component.emplace(root, arr.component_count);
        if (inserted) ++arr.component_count;
        arr.nodes[i].component = it->second;
    }
    for (auto& f : arr.faces) f.component = arr.nodes[arr.origin(f.half_edges.front())].component;

    // 9. One outer face per component: the minimum signed area (the
    // unbounded traversal runs clockwise, trees give ~zero area).
    std::vector<int> outer_face(arr.component_count, -1);
    for (int f = 0; f < static_cast<int>(arr.faces.size()); ++f) {
        const int c = arr.faces[f].component;
        if (outer_face[c] == -1 || arr.faces[f].signed_area < arr.faces[outer_face[c]].signed_area)
            outer_face[c] = f;
    }
    for (int c = 0; c < arr.component_count; ++c) arr.faces[outer_face[c]].outer = true;

    // 10. Euler check per component: V - E + F = 2 counting the outer face.
    std::vector<long long> v_count(arr.component_count, 0), e_count(arr.component_count, 0),
        f_count(arr.component_count, 0);
    for (const auto& n : arr.nodes) ++v_count[n.component];
    for (const auto& e : arr.edges) ++e_count[arr.nodes[e.node_a].component];
    for (const auto& f : arr.faces) ++f_count[f.component];
    for (int c = 0; c < arr.component_count; ++c)
        if (v_count[c] - e_count[c] + f_count[c] != 2)
            throw std::logic_error("arrangement: Euler check failed (V-E+F = " +
                                   std::to_string(v_count[c] - e_count[c] + f_count[c]) +
                                   " on component " + std::to_string(c) + ")");
    return arr;
}

} // namespace geoscale
