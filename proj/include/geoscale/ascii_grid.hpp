#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "geoscale/errors.hpp"
#include "geoscale/geometry.hpp"

namespace geoscale {

/// Row-major grid of elevation or occupancy values. Row 0 is the
/// northernmost row; `origin` is the lower-left corner of the grid extent.
struct RasterGrid {
    int ncols = 0;
    int nrows = 0;
    Point2D origin{0.0, 0.0};
    double cell_size = 1.0;
    std::optional<double> nodata;
    std::vector<double> values; // nrows * ncols, row 0 = north

    double at(int col, int row) const { return values[static_cast<std::size_t>(row) * ncols + col]; }
    double& at(int col, int row) { return values[static_cast<std::size_t>(row) * ncols + col]; }

    bool is_nodata(int col, int row) const {
        return nodata && at(col, row) == *nodata;
    }

    /// Center of cell (col, row) in grid coordinates; row 0 is the top.
    Point2D cell_center(int col, int row) const {
        return {origin.x + (col + 0.5) * cell_size,
                origin.y + (nrows - 1 - row + 0.5) * cell_size};
    }
};

inline void validate_grid(const RasterGrid& g) {
    if (g.ncols < 1 || g.nrows < 1) throw std::invalid_argument("raster grid needs ncols, nrows >= 1");
    if (!(g.cell_size > 0.0)) throw std::invalid_argument("raster grid needs cell_size > 0");
    if (g.values.size() != static_cast<std::size_t>(g.ncols) * g.nrows)
        throw std::invalid_argument("raster grid value count does not match ncols x nrows");
}

/// Parses an Esri ASCII grid: header keys ncols, nrows, xllcorner,
/// yllcorner, cellsize, optional NODATA_value, then nrows rows of ncols
/// numbers (first body row = northernmost).
inline RasterGrid parse_ascii_grid(std::istream& in) {
    RasterGrid grid;
    bool have_ncols = false, have_nrows = false, have_xll = false, have_yll = false, have_cell = false;

    std::string token;
    auto lower = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };

    // Header: key/value pairs until the first purely numeric token.
    std::streampos body_start = in.tellg();
    while (in >> token) {
        const std::string key = lower(token);
        if (key == "ncols" || key == "nrows" || key == "xllcorner" || key == "yllcorner" ||
            key == "cellsize" || key == "nodata_value") {
            double v;
            if (!(in >> v)) throw parse_error("ascii grid: missing value for header key '" + token + "'");
            if (key == "ncols") { grid.ncols = static_cast<int>(v); have_ncols = true; }
            else if (key == "nrows") { grid.nrows = static_cast<int>(v); have_nrows = true; }
            else if (key == "xllcorner") { grid.origin.x = v; have_xll = true; }
            else if (key == "yllcorner") { grid.origin.y = v; have_yll = true; }
            else if (key == "cellsize") { grid.cell_size = v; have_cell = true; }
            else grid.nodata = v;
            body_start = in.tellg();
        } else {
            break;
        }
    }
    if (!have_ncols) throw parse_error("ascii grid: missing header key 'ncols'");
    if (!have_nrows) throw parse_error("ascii grid: missing header key 'nrows'");
    if (!have_xll) throw parse_error("ascii grid: missing header key 'xllcorner'");
    if (!have_yll) throw parse_error("ascii grid: missing header key 'yllcorner'");
    if (!have_cell) throw parse_error("ascii grid: missing header key 'cellsize'");
    if (grid.ncols < 1 || grid.nrows < 1) throw parse_error("ascii grid: ncols and nrows must be >= 1");
    if (!(grid.cell_size > 0.0)) throw parse_error("ascii grid: cellsize must be > 0");

    // Body: re-read from where the header ended.
    in.clear();
    in.seekg(body_start);
    const std::size_t expected = static_cast<std::size_t>(grid.ncols) * grid.nrows;
    grid.values.reserve(expected);
    double v;
    while (in >> v) {
        if (grid.values.size() == expected)
            throw parse_error("ascii grid: more values than ncols x nrows");
        grid.values.push_back(v);
    }
    if (!in.eof()) {
        in.clear();
        std::string bad;
        in >> bad;
        throw parse_error("ascii grid: unexpected token '" + bad + "' in body");
    }
    if (grid.values.size() != expected) {
        std::ostringstream msg;
        msg << "ascii grid: header says " << grid.nrows << " x " << grid.ncols << " = " << expected
            << " values, body has " << grid.values.size();
        throw parse_error(msg.str());
    }
    return grid;
}

inline RasterGrid parse_ascii_grid(const std::string& text) {
    std::istringstream in(text);
    return parse_ascii_grid(in);
}

/// Writes the grid back in Esri ASCII form; numbers carry enough digits to
/// round-trip exactly.
inline void write_ascii_grid(const RasterGrid& g, std::ostream& out) {
    validate_grid(g);
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf;
    };
    out << "ncols " << g.ncols << "\n";
    out << "nrows " << g.nrows << "\n";
    out << "xllcorner ";
    put(g.origin.x);
    out << "\nyllcorner ";
    put(g.origin.y);
    out << "\ncellsize ";
    put(g.cell_size);
    out << "\n";
    if (g.nodata) {
        out << "NODATA_value ";
        put(*g.nodata);
        out << "\n";
    }
    for (int r = 0; r < g.nrows; ++r) {
        for (int c = 0; c < g.ncols; ++c) {
            if (c) out << ' ';
            put(g.at(c, r));
        }
        out << "\n";
    }
}

inline std::string to_ascii_grid(const RasterGrid& g) {
    std::ostringstream out;
    write_ascii_grid(g, out);
    return out.str();
}

} // namespace geoscale
