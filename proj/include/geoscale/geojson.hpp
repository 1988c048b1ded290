#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "geoscale/errors.hpp"
#include "geoscale/geometry.hpp"

namespace geoscale {

/// One parsed feature: a Polyline or Polygon plus its properties flattened
/// to strings (street names live here under "name").
struct GeoFeature {
    std::variant<Polyline, Polygon> geometry;
    std::map<std::string, std::string> properties;

    bool is_polyline() const { return std::holds_alternative<Polyline>(geometry); }
    const Polyline& polyline() const { return std::get<Polyline>(geometry); }
    const Polygon& polygon() const { return std::get<Polygon>(geometry); }
};

struct FeatureCollection {
    std::vector<GeoFeature> features;
};

namespace detail {

inline Point2D parse_position(const nlohmann::json& pos) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number())
        throw parse_error("geojson: position must be an array of at least two numbers");
    Point2D p{pos[0].get<double>(), pos[1].get<double>()};
    if (!is_finite(p)) throw parse_error("geojson: non-finite coordinate");
    return p;
}

inline std::vector<Point2D> parse_positions(const nlohmann::json& arr) {
    if (!arr.is_array()) throw parse_error("geojson: coordinate list must be an array");
    std::vector<Point2D> out;
    out.reserve(arr.size());
    for (const auto& pos : arr) out.push_back(parse_position(pos));
    return out;
}

inline std::string property_to_string(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

inline void parse_geometry(const nlohmann::json& geom, const std::map<std::string, std::string>& props,
                           std::vector<GeoFeature>& out) {
    if (!geom.is_object() || !geom.contains("type") || !geom["type"].is_string())
        throw parse_error("geojson: geometry without a type");
    const std::string type = geom["type"].get<std::string>();
    if (type != "LineString" && type != "MultiLineString" && type != "Polygon")
        throw parse_error("unsupported geometry: " + type);
    if (!geom.contains("coordinates"))
        throw parse_error("geojson: geometry without coordinates");
    const auto& coords = geom["coordinates"];

    if (type == "LineString") {
        Polyline line{parse_positions(coords)};
        validate_polyline(line);
        out.push_back(GeoFeature{line, props});
    } else if (type == "MultiLineString") {
        if (!coords.is_array()) throw parse_error("geojson: MultiLineString coordinates must be an array");
        for (const auto& part : coords) {
            Polyline line{parse_positions(part)};
            validate_polyline(line);
            out.push_back(GeoFeature{line, props});
        }
    } else {
        if (!coords.is_array() || coords.empty())
            throw parse_error("geojson: Polygon needs at least one ring");
        Polygon poly;
        poly.exterior = parse_positions(coords[0]);
        for (std::size_t i = 1; i < coords.size(); ++i)
            poly.holes.push_back(parse_positions(coords[i]));
        normalize_polygon(poly);
        polygon_area(poly); // rejects degenerate rings
        out.push_back(GeoFeature{poly, props});
    }
}

} // namespace detail

/// Parses the toolkit's GeoJSON subset: a FeatureCollection, a Feature, or
/// a bare geometry holding only LineString / MultiLineString / Polygon.
/// Coordinates are taken as planar Cartesian values.
inline FeatureCollection parse_geojson_subset(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("geojson: ") + e.what(), e.byte);
    }

    FeatureCollection fc;
    auto parse_feature = [&](const nlohmann::json& feat) {
        if (!feat.is_object() || !feat.contains("geometry"))
            throw parse_error("geojson: feature without geometry");
        std::map<std::string, std::string> props;
        if (feat.contains("properties") && feat["properties"].is_object())
            for (auto it = feat["properties"].begin(); it != feat["properties"].end(); ++it)
                props[it.key()] = detail::property_to_string(it.value());
        if (feat.contains("id"))
            props.emplace("id", detail::property_to_string(feat["id"]));
        detail::parse_geometry(feat["geometry"], props, fc.features);
    };

    if (!root.is_object() || !root.contains("type") || !root["type"].is_string())
        throw parse_error("geojson: root object must carry a type");
    const std::string type = root["type"].get<std::string>();
    if (type == "FeatureCollection") {
        if (!root.contains("features") || !root["features"].is_array())
            throw parse_error("geojson: FeatureCollection without features array");
        for (const auto& feat : root["features"]) parse_feature(feat);
    } else if (type == "Feature") {
        parse_feature(root);
    } else {
        detail::parse_geometry(root, {}, fc.features);
    }
    return fc;
}

/// Heuristic: coordinates that all fit in lon/lat ranges are probably
/// unprojected geographic data. Analyses here are metric, so the CLI warns.
inline bool looks_geographic(const FeatureCollection& fc) {
    BoundingBox box;
    bool any = false;
    for (const auto& f : fc.features) {
        if (f.is_polyline())
            for (Point2D p : f.polyline().vertices) { box.expand(p); any = true; }
        else
            for (Point2D p : f.polygon().exterior) { box.expand(p); any = true; }
    }
    if (!any) return false;
    return box.min.x >= -180.0 && box.max.x <= 180.0 && box.min.y >= -90.0 && box.max.y <= 90.0;
}

namespace detail {

inline nlohmann::json positions_json(const std::vector<Point2D>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (Point2D p : pts) arr.push_back(nlohmann::json::array({p.x, p.y}));
    return arr;
}

} // namespace detail

inline nlohmann::json geometry_json(const Polyline& line) {
    return {{"type", "LineString"}, {"coordinates", detail::positions_json(line.vertices)}};
}

inline nlohmann::json geometry_json(const Polygon& poly) {
    nlohmann::json rings = nlohmann::json::array();
    rings.push_back(detail::positions_json(poly.exterior));
    for (const auto& hole : poly.holes) rings.push_back(detail::positions_json(hole));
    return {{"type", "Polygon"}, {"coordinates", rings}};
}

inline nlohmann::json feature_json(const GeoFeature& f) {
    nlohmann::json geom = f.is_polyline() ? geometry_json(f.polyline()) : geometry_json(f.polygon());
    nlohmann::json props = nlohmann::json::object();
    for (const auto& [k, v] : f.properties) props[k] = v;
    return {{"type", "Feature"}, {"geometry", geom}, {"properties", props}};
}

/// Serializes a FeatureCollection. Doubles use shortest round-trip form,
/// so parse(to_geojson(x)) restores coordinates bit for bit.
inline std::string to_geojson(const FeatureCollection& fc, int indent = 2) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& f : fc.features) features.push_back(feature_json(f));
    nlohmann::json root = {{"type", "FeatureCollection"}, {"features", features}};
    return root.dump(indent);
}

} // namespace geoscale
