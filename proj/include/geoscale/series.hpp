#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "geoscale/errors.hpp"

namespace geoscale {

/// Ordered collection of positive finite measurements (segment lengths,
/// block areas, Zipf numbers, connectivity degrees...).
struct ValueSeries {
    std::vector<double> values;
    std::string label;
};

inline void validate_series(const ValueSeries& s) {
    if (s.values.empty()) throw std::invalid_argument("value series is empty");
    for (double v : s.values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("value series requires positive finite values");
}

/// The harmonic sequence 1, 1/2, 1/3, ..., 1/n.
inline ValueSeries zipf_series(std::size_t n) {
    if (n == 0) throw std::invalid_argument("zipf series needs n >= 1");
    ValueSeries s;
    s.label = "zipf";
    s.values.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) s.values.push_back(1.0 / static_cast<double>(k));
    return s;
}

/// Values sorted descending with 1-based ranks; ties keep input order.
inline std::vector<std::pair<std::size_t, double>> rank_size_table(const ValueSeries& s) {
    validate_series(s);
    std::vector<double> sorted = s.values;
    std::stable_sort(sorted.begin(), sorted.end(), std::greater<double>());
    std::vector<std::pair<std::size_t, double>> table;
    table.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) table.emplace_back(i + 1, sorted[i]);
    return table;
}

/// Reads one positive number per line; '#' starts a comment, blank lines
/// are skipped. Line numbers are 1-based in error messages.
inline ValueSeries read_value_series(std::istream& in, const std::string& label = "") {
    ValueSeries s;
    s.label = label;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double v;
        if (!(ls >> v)) {
            std::string rest;
            if (ls.clear(), ls >> rest) // non-numeric garbage
                throw parse_error("series: line " + std::to_string(lineno) + ": expected a number, got '" + rest + "'");
            continue; // blank or comment-only line
        }
        std::string trailing;
        if (ls >> trailing)
            throw parse_error("series: line " + std::to_string(lineno) + ": trailing content '" + trailing + "'");
        if (!(v > 0.0) || !std::isfinite(v))
            throw parse_error("series: line " + std::to_string(lineno) + ": values must be positive and finite");
        s.values.push_back(v);
    }
    if (s.values.empty()) throw parse_error("series: no values found");
    return s;
}

inline ValueSeries read_value_series(const std::string& text, const std::string& label = "") {
    std::istringstream in(text);
    return read_value_series(in, label);
}

inline double series_mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace geoscale
