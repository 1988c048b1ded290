#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "geoscale/ascii_grid.hpp"
#include "geoscale/errors.hpp"
#include "geoscale/geometry.hpp"

namespace geoscale {

constexpr double kSlopeNoData = -9999.0;

/// Slope in degrees per cell, same dimensions as the source DEM. Border
/// cells and cells with a nodata neighbor carry the nodata sentinel.
struct SlopeGrid {
    RasterGrid grid;
    std::string method = "horn";
};

/// Horn's 3x3 finite-difference slope. Exact for linear surfaces, which
/// makes planes the calibration fixture of choice.
inline SlopeGrid slope_grid(const RasterGrid& dem) {
    validate_grid(dem);
    if (dem.ncols < 3 || dem.nrows < 3)
        throw std::invalid_argument("slope needs a DEM of at least 3x3 cells");

    SlopeGrid out;
    out.grid = dem;
    out.grid.nodata = kSlopeNoData;
    out.grid.values.assign(out.grid.values.size(), kSlopeNoData);

    for (int r = 1; r + 1 < dem.nrows; ++r) {
        for (int c = 1; c + 1 < dem.ncols; ++c) {
            bool any_nodata = false;
            double z[3][3];
            for (int dr = -1; dr <= 1 && !any_nodata; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dem.is_nodata(c + dc, r + dr)) {
                        any_nodata = true;
                        break;
                    }
                    z[dr + 1][dc + 1] = dem.at(c + dc, r + dr);
                }
            if (any_nodata) continue;
            // Row 0 of the window is the northern row (+y).
            const double gx = ((z[0][2] + 2.0 * z[1][2] + z[2][2]) -
                               (z[0][0] + 2.0 * z[1][0] + z[2][0])) /
                              (8.0 * dem.cell_size);
            const double gy = ((z[0][0] + 2.0 * z[0][1] + z[0][2]) -
                               (z[2][0] + 2.0 * z[2][1] + z[2][2])) /
                              (8.0 * dem.cell_size);
            out.grid.at(c, r) = rad_to_deg(std::atan(std::sqrt(gx * gx + gy * gy)));
        }
    }
    return out;
}

struct Coarsened {
    RasterGrid grid;
    int dropped_cols = 0;
    int dropped_rows = 0;

    bool remainder_dropped() const { return dropped_cols > 0 || dropped_rows > 0; }
};

/// Block-mean coarsening: each output cell averages its factor x factor
/// block (nodata-aware), modelling sensor footprint averaging at lower
/// resolution. Trailing cells that do not fill a block are dropped and
/// reported so callers can warn.
inline Coarsened coarsen(const RasterGrid& dem, int factor) {
    validate_grid(dem);
    if (factor < 2) throw std::invalid_argument("coarsen factor must be >= 2");

    Coarsened out;
    out.grid.ncols = dem.ncols / factor;
    out.grid.nrows = dem.nrows / factor;
    if (out.grid.ncols < 1 || out.grid.nrows < 1)
        throw std::invalid_argument("coarsen factor exceeds grid extent");
    out.dropped_cols = dem.ncols - out.grid.ncols * factor;
    out.dropped_rows = dem.nrows - out.grid.nrows * factor;
    out.grid.cell_size = dem.cell_size * factor;
    out.grid.nodata = dem.nodata;
    // Keep the lower-left corner fixed; dropped remainder comes off the
    // top/right edge (rows count from the north).
    out.grid.origin = dem.origin;
    out.grid.origin.y += out.dropped_rows * dem.cell_size;
    out.grid.values.assign(static_cast<std::size_t>(out.grid.ncols) * out.grid.nrows, 0.0);

    for (int r = 0; r < out.grid.nrows; ++r) {
        for (int c = 0; c < out.grid.ncols; ++c) {
            double sum = 0.0;
            int valid = 0;
            for (int dr = 0; dr < factor; ++dr)
                for (int dc = 0; dc < factor; ++dc) {
                    const int sc = c * factor + dc;
                    const int sr = r * factor + dr;
                    if (dem.is_nodata(sc, sr)) continue;
                    sum += dem.at(sc, sr);
                    ++valid;
                }
            if (valid == 0) {
                if (!out.grid.nodata) out.grid.nodata = kSlopeNoData;
                out.grid.at(c, r) = *out.grid.nodata;
            } else {
                out.grid.at(c, r) = sum / valid;
            }
        }
    }
    return out;
}

struct SlopeHistogram {
    double bin_width = 1.0;
    std::vector<std::pair<double, double>> bins; // (lower edge in degrees, area in units^2)

    double total_area() const {
        double t = 0.0;
        for (auto [lo, a] : bins) t += a;
        return t;
    }
};

/// Bins non-nodata slope cells by floor(slope / bin_width); each bin's
/// area is its cell count times cell_size^2. Bins run contiguously from
/// zero through the maximum observed slope.
inline SlopeHistogram slope_histogram(const SlopeGrid& s, double bin_width = 1.0) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width))
        throw std::invalid_argument("histogram bin width must be positive");
    SlopeHistogram hist;
    hist.bin_width = bin_width;
    std::vector<std::size_t> counts;
    for (int r = 0; r < s.grid.nrows; ++r)
        for (int c = 0; c < s.grid.ncols; ++c) {
            if (s.grid.is_nodata(c, r)) continue;
            const auto bin = static_cast<std::size_t>(std::floor(s.grid.at(c, r) / bin_width));
            if (bin >= counts.size()) counts.resize(bin + 1, 0);
            ++counts[bin];
        }
    const double cell_area = s.grid.cell_size * s.grid.cell_size;
    hist.bins.reserve(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        hist.bins.emplace_back(static_cast<double>(i) * bin_width, static_cast<double>(counts[i]) * cell_area);
    return hist;
}

struct SlopeStats {
    double min_deg = 0.0;
    double max_deg = 0.0;
    std::size_t valid_cells = 0;

    double range_width() const { return max_deg - min_deg; }
};

inline SlopeStats slope_stats(const SlopeGrid& s) {
    SlopeStats st;
    bool first = true;
    for (int r = 0; r < s.grid.nrows; ++r)
        for (int c = 0; c < s.grid.ncols; ++c) {
            if (s.grid.is_nodata(c, r)) continue;
            const double v = s.grid.at(c, r);
            if (first) {
                st.min_deg = st.max_deg = v;
                first = false;
            } else {
                st.min_deg = std::min(st.min_deg, v);
                st.max_deg = std::max(st.max_deg, v);
            }
            ++st.valid_cells;
        }
    return st;
}

namespace detail {

/// Fixed-behaviour uniform doubles in [-1, 1) from a 64-bit SplitMix/xorshift
/// mix, so surfaces are bit-identical across standard libraries.
class SurfaceRng {
public:
    explicit SurfaceRng(std::uint64_t seed) : state_(seed + 0x9E3779B97F4A7C15ULL) {}

    double next_signed() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        const double unit = static_cast<double>(z >> 11) * 0x1.0p-53; // [0,1)
        return 2.0 * unit - 1.0;
    }

private:
    std::uint64_t state_;
};

} // namespace detail

/// Diamond-square midpoint displacement on a (2^k + 1)^2 grid. The
/// displacement amplitude is divided by 2^H per level, so small H gives
/// rough terrain and H near 1 gives smooth terrain. Fully determined by
/// the seed.
inline RasterGrid synthetic_fractal_surface(int size_exponent, double roughness, std::uint64_t seed) {
    if (size_exponent < 2 || size_exponent > 12)
        throw std::invalid_argument("surface size exponent must lie in [2, 12]");
    if (!(roughness > 0.0 && roughness < 1.0))
        throw std::invalid_argument("surface roughness H must lie in (0, 1)");

    const int n = (1 << size_exponent) + 1;
    RasterGrid g;
    g.ncols = g.nrows = n;
    g.cell_size = 1.0;
    g.origin = {0.0, 0.0};
    g.values.assign(static_cast<std::size_t>(n) * n, 0.0);

    detail::SurfaceRng rng(seed);
    double amplitude = static_cast<double>(n - 1) / 4.0;
    const double decay = std::pow(2.0, -roughness);

    g.at(0, 0) = rng.next_signed() * amplitude;
    g.at(n - 1, 0) = rng.next_signed() * amplitude;
    g.at(0, n - 1) = rng.next_signed() * amplitude;
    g.at(n - 1, n - 1) = rng.next_signed() * amplitude;

    for (int step = n - 1; step > 1; step /= 2) {
        const int half = step / 2;
        // Diamond: square centers from their four corners.
        for (int r = half; r < n; r += step)
            for (int c = half; c < n; c += step) {
                const double mean = (g.at(c - half, r - half) + g.at(c + half, r - half) +
                                     g.at(c - half, r + half) + g.at(c + half, r + half)) /
                                    4.0;
                g.at(c, r) = mean + rng.next_signed() * amplitude;
            }
        // Square: edge midpoints from their available diamond neighbours.
        for (int r = 0; r < n; r += half) {
            for (int c = (r / half) % 2 == 0 ? half : 0; c < n; c += step) {
                double sum = 0.0;
                int cnt = 0;
                if (c - half >= 0) { sum += g.at(c - half, r); ++cnt; }
                if (c + half < n) { sum += g.at(c + half, r); ++cnt; }
                if (r - half >= 0) { sum += g.at(c, r - half); ++cnt; }
                if (r + half < n) { sum += g.at(c, r + half); ++cnt; }
                g.at(c, r) = sum / cnt + rng.next_signed() * amplitude;
            }
        }
        amplitude *= decay;
    }
    return g;
}

} // namespace geoscale
