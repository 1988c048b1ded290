#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geoscale/errors.hpp"

namespace geoscale {

/// Per-cell event and population counts (e.g. unemployed / labor force).
struct CellCounts {
    long long numerator = 0;
    long long denominator = 0;
};

/// Grid of counts; cell (col, row) lives at index row * ncols + col with
/// row 0 at the top.
struct CountGrid {
    int ncols = 0;
    int nrows = 0;
    std::vector<CellCounts> cells;

    std::size_t index(int col, int row) const { return static_cast<std::size_t>(row) * ncols + col; }
    const CellCounts& at(int col, int row) const { return cells[index(col, row)]; }
};

inline void validate_count_grid(const CountGrid& g) {
    if (g.ncols < 1 || g.nrows < 1) throw std::invalid_argument("count grid needs ncols, nrows >= 1");
    if (g.cells.size() != static_cast<std::size_t>(g.ncols) * g.nrows)
        throw std::invalid_argument("count grid cell count does not match ncols x nrows");
    for (const auto& c : g.cells) {
        if (c.numerator < 0 || c.denominator < 0)
            throw std::invalid_argument("counts must be non-negative");
        if (c.numerator > c.denominator)
            throw std::invalid_argument("cell numerator exceeds denominator (rate above 100%)");
    }
}

/// Assignment of every cell to exactly one zone.
struct Zoning {
    std::string name;
    std::vector<int> assignment; // cell index -> zone id

    std::set<int> zone_ids() const { return {assignment.begin(), assignment.end()}; }
    std::size_t zone_count() const { return zone_ids().size(); }
};

inline void validate_zoning(const CountGrid& g, const Zoning& z) {
    if (z.assignment.size() != g.cells.size())
        throw std::invalid_argument("zoning '" + z.name + "' does not assign every cell");
}

/// Aggregated rate per zone in percent; zones whose denominators sum to
/// zero get no rate rather than a fabricated 0%.
inline std::map<int, std::optional<double>> aggregate_rates(const CountGrid& g, const Zoning& z) {
    validate_count_grid(g);
    validate_zoning(g, z);
    std::map<int, std::pair<long long, long long>> sums;
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        auto& [num, den] = sums[z.assignment[i]];
        num += g.cells[i].numerator;
        den += g.cells[i].denominator;
    }
    std::map<int, std::optional<double>> rates;
    for (const auto& [zone, nd] : sums) {
        if (nd.second == 0)
            rates[zone] = std::nullopt;
        else
            rates[zone] = 100.0 * static_cast<double>(nd.first) / static_cast<double>(nd.second);
    }
    return rates;
}

/// Rate rounded to the nearest whole percent for display tables.
inline long long display_percent(double rate) { return std::llround(rate); }

struct ScaleEffectRow {
    std::string zoning_name;
    std::size_t zone_count = 0;
    double min_rate = 0.0;
    double max_rate = 0.0;
    double spread = 0.0;
};

namespace detail {

/// Checks that `coarse` is a union of `fine` zones; reports the first fine
/// zone that straddles two coarse zones.
inline void check_nesting(const CountGrid& g, const Zoning& fine, const Zoning& coarse) {
    std::map<int, int> fine_to_coarse;
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        const int fz = fine.assignment[i];
        const int cz = coarse.assignment[i];
        auto [it, inserted] = fine_to_coarse.emplace(fz, cz);
        if (!inserted && it->second != cz) {
            std::ostringstream msg;
            msg << "zonings are not nested: zone " << fz << " of '" << fine.name
                << "' spans zones " << it->second << " and " << cz << " of '" << coarse.name << "'";
            throw std::invalid_argument(msg.str());
        }
    }
}

} // namespace detail

/// Scale effect across a fine-to-coarse ladder of nested zonings: per
/// level, the min/max/spread of defined zone rates. The global rate is
/// identical at every level (mass conservation), only the spread moves.
inline std::vector<ScaleEffectRow> scale_effect_table(const CountGrid& g, const std::vector<Zoning>& nested) {
    validate_count_grid(g);
    if (nested.empty()) throw std::invalid_argument("scale effect needs at least one zoning");
    for (const auto& z : nested) validate_zoning(g, z);
    for (std::size_t i = 0; i + 1 < nested.size(); ++i)
        detail::check_nesting(g, nested[i], nested[i + 1]);

    std::vector<ScaleEffectRow> table;
    table.reserve(nested.size());
    for (const auto& z : nested) {
        ScaleEffectRow row;
        row.zoning_name = z.name;
        row.zone_count = z.zone_count();
        bool first = true;
        for (const auto& [zone, rate] : aggregate_rates(g, z)) {
            if (!rate) continue;
            if (first) {
                row.min_rate = row.max_rate = *rate;
                first = false;
            } else {
                row.min_rate = std::min(row.min_rate, *rate);
                row.max_rate = std::max(row.max_rate, *rate);
            }
        }
        if (first) throw numeric_error("zoning '" + z.name + "' has no zone with a defined rate");
        row.spread = row.max_rate - row.min_rate;
        table.push_back(row);
    }
    return table;
}

struct ZoningEffectEntry {
    std::string name;
    std::vector<std::pair<int, std::optional<double>>> rates; // by zone id
    double min_rate = 0.0;
    double max_rate = 0.0;
    double spread = 0.0;
};

struct ZoningEffect {
    std::vector<ZoningEffectEntry> zonings;
    // Across-zoning range of each per-zoning statistic.
    double min_rate_range = 0.0;
    double max_rate_range = 0.0;
    double spread_range = 0.0;
};

/// Zoning effect: same grid, same zone count, different configurations.
/// Reports each zoning's rate vector and how far the summary statistics
/// move between configurations.
inline ZoningEffect zoning_effect_spread(const CountGrid& g, const std::vector<Zoning>& zonings) {
    validate_count_grid(g);
    if (zonings.size() < 2) throw std::invalid_argument("zoning effect needs at least 2 zonings");
    const std::size_t zone_count = zonings.front().zone_count();
    for (const auto& z : zonings) {
        validate_zoning(g, z);
        if (z.zone_count() != zone_count)
            throw std::invalid_argument("zoning '" + z.name + "' has " + std::to_string(z.zone_count()) +
                                        " zones, expected " + std::to_string(zone_count));
    }

    ZoningEffect effect;
    for (const auto& z : zonings) {
        ZoningEffectEntry entry;
        entry.name = z.name;
        bool first = true;
        for (const auto& [zone, rate] : aggregate_rates(g, z)) {
            entry.rates.emplace_back(zone, rate);
            if (!rate) continue;
            if (first) {
                entry.min_rate = entry.max_rate = *rate;
                first = false;
            } else {
                entry.min_rate = std::min(entry.min_rate, *rate);
                entry.max_rate = std::max(entry.max_rate, *rate);
            }
        }
        if (first) throw numeric_error("zoning '" + z.name + "' has no zone with a defined rate");
        entry.spread = entry.max_rate - entry.min_rate;
        effect.zonings.push_back(std::move(entry));
    }
    auto range_of = [&](auto pick) {
        double lo = pick(effect.zonings.front());
        double hi = lo;
        for (const auto& e : effect.zonings) {
            lo = std::min(lo, pick(e));
            hi = std::max(hi, pick(e));
        }
        return hi - lo;
    };
    effect.min_rate_range = range_of([](const ZoningEffectEntry& e) { return e.min_rate; });
    effect.max_rate_range = range_of([](const ZoningEffectEntry& e) { return e.max_rate; });
    effect.spread_range = range_of([](const ZoningEffectEntry& e) { return e.spread; });
    return effect;
}

// ---------------------------------------------------------------------------
// Bundled demo dataset.
//
// A 4x4 unemployment grid reconstructed around four documented rate
// identities: cell (0,0) 20/200 = 10%; the top-left 2x2 block
// (20+10+30+40)/(200+100+500+400) = 8.33%; row 0
// (20+10+50+60)/(200+100+300+500) = 12.7%; column 2
// (20+50+30+20)/(200+300+100+200) = 15%. The remaining cells are filler
// chosen to keep every rate below 100%.
// ---------------------------------------------------------------------------

inline CountGrid demo_count_grid() {
    CountGrid g;
    g.ncols = g.nrows = 4;
    g.cells = {
        {20, 200}, {10, 100}, {50, 300}, {60, 500}, // row 0
        {30, 500}, {40, 400}, {30, 100}, {70, 600}, // row 1
        {40, 300}, {20, 400}, {20, 200}, {50, 600}, // row 2
        {10, 200}, {60, 400}, {20, 200}, {30, 300}, // row 3
    };
    return g;
}

/// One zone per cell.
inline Zoning demo_zoning_cells() {
    Zoning z;
    z.name = "cells";
    for (int i = 0; i < 16; ++i) z.assignment.push_back(i);
    return z;
}

/// Four 2x2 blocks: 0 = top-left, 1 = top-right, 2 = bottom-left, 3 = bottom-right.
inline Zoning demo_zoning_blocks() {
    Zoning z;
    z.name = "blocks2x2";
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col)
            z.assignment.push_back((row / 2) * 2 + col / 2);
    return z;
}

inline Zoning demo_zoning_rows() {
    Zoning z;
    z.name = "rows";
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col) z.assignment.push_back(row);
    return z;
}

inline Zoning demo_zoning_columns() {
    Zoning z;
    z.name = "columns";
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col) z.assignment.push_back(col);
    return z;
}

inline Zoning demo_zoning_whole() {
    Zoning z;
    z.name = "all";
    z.assignment.assign(16, 0);
    return z;
}

// ---------------------------------------------------------------------------
// CSV ingestion: cell rows "col,row,numerator,denominator"; zoning rows
// "col,row,zone_id". '#' starts a comment.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::vector<long long>> read_csv_rows(std::istream& in, std::size_t fields,
                                                         const std::string& what) {
    std::vector<std::vector<long long>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
        std::vector<long long> row;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) {
            try {
                std::size_t used = 0;
                const long long v = std::stoll(field, &used);
                if (field.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("");
                row.push_back(v);
            } catch (const std::exception&) {
                throw parse_error(what + ": line " + std::to_string(lineno) + ": expected an integer, got '" +
                                  field + "'");
            }
        }
        if (row.size() != fields)
            throw parse_error(what + ": line " + std::to_string(lineno) + ": expected " + std::to_string(fields) +
                              " comma-separated fields");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw parse_error(what + ": no data rows");
    return rows;
}

} // namespace detail

inline CountGrid read_count_grid(std::istream& in) {
    const auto rows = detail::read_csv_rows(in, 4, "count grid");
    int ncols = 0, nrows = 0;
    for (const auto& r : rows) {
        if (r[0] < 0 || r[1] < 0) throw parse_error("count grid: negative cell coordinates");
        ncols = std::max(ncols, static_cast<int>(r[0]) + 1);
        nrows = std::max(nrows, static_cast<int>(r[1]) + 1);
    }
    CountGrid g;
    g.ncols = ncols;
    g.nrows = nrows;
    g.cells.assign(static_cast<std::size_t>(ncols) * nrows, CellCounts{-1, -1});
    for (const auto& r : rows) {
        auto& cell = g.cells[g.index(static_cast<int>(r[0]), static_cast<int>(r[1]))];
        if (cell.numerator >= 0) throw parse_error("count grid: duplicate cell definition");
        cell = CellCounts{r[2], r[3]};
    }
    for (std::size_t i = 0; i < g.cells.size(); ++i)
        if (g.cells[i].numerator < 0)
            throw parse_error("count grid: cell (" + std::to_string(i % ncols) + "," +
                              std::to_string(i / ncols) + ") missing");
    validate_count_grid(g);
    return g;
}

inline Zoning read_zoning(std::istream& in, const CountGrid& g, const std::string& name) {
    const auto rows = detail::read_csv_rows(in, 3, "zoning '" + name + "'");
    Zoning z;
    z.name = name;
    z.assignment.assign(g.cells.size(), -1);
    for (const auto& r : rows) {
        if (r[0] < 0 || r[0] >= g.ncols || r[1] < 0 || r[1] >= g.nrows)
            throw parse_error("zoning '" + name + "': cell (" + std::to_string(r[0]) + "," +
                              std::to_string(r[1]) + ") outside the grid");
        z.assignment[g.index(static_cast<int>(r[0]), static_cast<int>(r[1]))] = static_cast<int>(r[2]);
    }
    for (std::size_t i = 0; i < z.assignment.size(); ++i)
        if (z.assignment[i] < 0)
            throw parse_error("zoning '" + name + "': cell (" + std::to_string(i % g.ncols) + "," +
                              std::to_string(i / g.ncols) + ") not assigned");
    return z;
}

} // namespace geoscale
