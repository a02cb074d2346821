#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "bwp/common.hpp"
#include "bwp/metrics.hpp"

namespace bwp {

/// Rectangular raster of per-UE results. Row order is y-major with x
/// ascending inside a row; cell (i, j) is centered at
/// (x0 + (i+0.5)*cell_w, y0 + (j+0.5)*cell_h).
struct GridMap {
    double x0 = 0.0;
    double y0 = 0.0;
    double cell_w = 0.0;
    double cell_h = 0.0;
    int nx = 0;
    int ny = 0;
    std::vector<BwpResult> cells;

    const BwpResult& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * nx + i]; }
    Point2D center(int i, int j) const {
        return {x0 + (i + 0.5) * cell_w, y0 + (j + 0.5) * cell_h};
    }
};

namespace detail {

inline void grid_dims(double width, double height, double cell, int min_cells, int& nx, int& ny) {
    if (!(cell > 0.0)) throw std::invalid_argument("grid cell size must be positive");
    nx = std::max(1, static_cast<int>(std::lround(width / cell)));
    ny = std::max(1, static_cast<int>(std::lround(height / cell)));
    while (static_cast<long long>(nx) * ny < min_cells) {
        nx *= 2;
        ny *= 2;
    }
}

}  // namespace detail

/// Evaluates every interior cell center of a rectangular region of `layout`.
inline GridMap grid_eval(const BuildingLayout& layout, const Scenario& s, double x0, double y0, double width,
                         double height, double cell, const QuadratureConfig& quad = {},
                         const EvalModels& models = {}, unsigned threads = 1, int min_cells = 1) {
    GridMap g;
    detail::grid_dims(width, height, cell, min_cells, g.nx, g.ny);
    g.x0 = x0;
    g.y0 = y0;
    g.cell_w = width / g.nx;
    g.cell_h = height / g.ny;
    g.cells.resize(static_cast<std::size_t>(g.nx) * g.ny);
    const OpenSpacePowers open = open_space_powers(s, quad);
    parallel_for(g.cells.size(), threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) % g.nx;
        const int j = static_cast<int>(idx) / g.nx;
        g.cells[idx] = evaluate_with_open(layout, s, g.center(i, j), open, quad, models);
    });
    return g;
}

/// UE grid over a single rectangular room (>= 100 interior cells; the cell
/// size shrinks for small rooms). Cell centers keep a half-cell margin from
/// the walls.
inline GridMap room_grid_eval(const RoomSpec& spec, const Scenario& s, double cell = 0.5,
                              const QuadratureConfig& quad = {}, const EvalModels& models = {},
                              unsigned threads = 1, double wall_attenuation_db = 10.0, int min_cells = 100) {
    const BuildingLayout room = make_rect_room(spec, wall_attenuation_db);
    return grid_eval(room, s, 0.0, 0.0, spec.width, spec.length, cell, quad, models, threads, min_cells);
}

struct MeanMetrics {
    double g_i = 0.0;
    double g_p = 0.0;
};

inline MeanMetrics mean_metrics(const GridMap& grid) {
    if (grid.cells.empty()) throw std::invalid_argument("mean of an empty grid");
    MeanMetrics m;
    for (const auto& c : grid.cells) {
        m.g_i += c.g_i;
        m.g_p += c.g_p;
    }
    m.g_i /= grid.cells.size();
    m.g_p /= grid.cells.size();
    return m;
}

/// Empirical CDF: sorted sample points with right-continuous cumulative
/// probabilities, duplicates collapsed onto the last index.
inline std::vector<std::pair<double, double>> cdf(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("cdf of an empty sample");
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, double>> out;
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
        out.emplace_back(values[i], (i + 1) / n);
    }
    return out;
}

/// Per-unit averages over an office raster; cells are assigned by center.
struct UnitMetrics {
    UnitRect unit;
    MeanMetrics mean;
    int cells = 0;
};

inline std::vector<UnitMetrics> per_unit_metrics(const GridMap& grid, const std::vector<UnitRect>& units) {
    std::vector<UnitMetrics> out;
    out.reserve(units.size());
    for (const auto& u : units) {
        UnitMetrics m;
        m.unit = u;
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                if (!u.rect.contains(grid.center(i, j))) continue;
                m.mean.g_i += grid.at(i, j).g_i;
                m.mean.g_p += grid.at(i, j).g_p;
                ++m.cells;
            }
        }
        if (m.cells > 0) {
            m.mean.g_i /= m.cells;
            m.mean.g_p /= m.cells;
        }
        out.push_back(std::move(m));
    }
    return out;
}

struct SweepSpec {
    std::vector<double> areas_m2;
    std::vector<double> aspect_ratios;
    std::vector<double> frequencies_ghz;

    void validate() const {
        for (double a : areas_m2)
            if (!(a > 0.0)) throw std::invalid_argument("sweep areas must be positive");
        for (double ar : aspect_ratios)
            if (!(ar >= 1.0)) throw std::invalid_argument("sweep aspect ratios must be >= 1");
        for (double f : frequencies_ghz)
            if (!(f >= 0.5 && f <= 100.0))
                throw std::invalid_argument("sweep frequencies must be in [0.5, 100] GHz");
    }
};

struct DimensionRow {
    double area_m2 = 0.0;
    double aspect_ratio = 0.0;
    MeanMetrics mean;
};

inline std::vector<DimensionRow> sweep_dimensions(const SweepSpec& spec, const Scenario& s, double cell = 0.5,
                                                  const QuadratureConfig& quad = {},
                                                  const EvalModels& models = {}, unsigned threads = 1) {
    spec.validate();
    if (spec.areas_m2.empty() || spec.aspect_ratios.empty())
        throw std::invalid_argument("dimension sweep requires areas and aspect ratios");
    std::vector<DimensionRow> rows;
    for (double area : spec.areas_m2) {
        for (double ar : spec.aspect_ratios) {
            DimensionRow row;
            row.area_m2 = area;
            row.aspect_ratio = ar;
            row.mean = mean_metrics(
                room_grid_eval(RoomSpec::from_area_ar(area, ar), s, cell, quad, models, threads));
            rows.push_back(row);
        }
    }
    return rows;
}

struct FrequencyRow {
    double frequency_ghz = 0.0;
    MeanMetrics mean;
};

struct FrequencySweep {
    std::vector<FrequencyRow> rows;
    bool g_p_non_decreasing = false;  // with 1% per-step slack
    bool g_i_unimodal = false;        // single sign change of differences, 1% slack
    double f_star_ghz = 0.0;          // argmax of mean g_i after refinement
    double f_lo_ghz = 0.0;            // final bracket
    double f_hi_ghz = 0.0;
};

namespace detail {

inline MeanMetrics room_mean_at_frequency(const RoomSpec& room, Scenario s, double f, double cell,
                                          const QuadratureConfig& quad, const EvalModels& models,
                                          unsigned threads) {
    s.frequency_ghz = f;  // coverage radii re-solve per frequency, PLEs fixed
    return mean_metrics(room_grid_eval(room, s, cell, quad, models, threads));
}

}  // namespace detail

/// Frequency sweep on one room plus a golden-section refinement of the mean
/// g_i optimum to a +-2% bracket.
inline FrequencySweep sweep_frequency(const SweepSpec& spec, const Scenario& base, const RoomSpec& room,
                                      double cell = 0.5, const QuadratureConfig& quad = {},
                                      const EvalModels& models = {}, unsigned threads = 1) {
    spec.validate();
    if (spec.frequencies_ghz.size() < 3)
        throw std::invalid_argument("frequency sweep requires at least 3 points");
    std::vector<double> fs = spec.frequencies_ghz;
    std::sort(fs.begin(), fs.end());

    FrequencySweep out;
    for (double f : fs) {
        FrequencyRow row;
        row.frequency_ghz = f;
        row.mean = detail::room_mean_at_frequency(room, base, f, cell, quad, models, threads);
        out.rows.push_back(row);
    }

    // Trend flags with 1% slack per step.
    out.g_p_non_decreasing = true;
    for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
        if (out.rows[i + 1].mean.g_p < out.rows[i].mean.g_p * 0.99) out.g_p_non_decreasing = false;
    }
    double gi_max = 0.0;
    for (const auto& r : out.rows) gi_max = std::max(gi_max, r.mean.g_i);
    int sign_changes = 0;
    int last_sign = 0;
    for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
        const double d = out.rows[i + 1].mean.g_i - out.rows[i].mean.g_i;
        if (std::abs(d) <= 0.01 * gi_max) continue;
        const int sign = d > 0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) ++sign_changes;
        last_sign = sign;
    }
    out.g_i_unimodal = sign_changes <= 1;

    // Golden-section refinement of argmax(mean g_i) in log-frequency.
    std::size_t k = 0;
    for (std::size_t i = 0; i < out.rows.size(); ++i)
        if (out.rows[i].mean.g_i > out.rows[k].mean.g_i) k = i;
    double lo = std::log(fs[k > 0 ? k - 1 : k]);
    double hi = std::log(fs[std::min(k + 1, fs.size() - 1)]);
    auto gi_of = [&](double logf) {
        return detail::room_mean_at_frequency(room, base, std::exp(logf), cell, quad, models, threads).g_i;
    };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = gi_of(c), fd = gi_of(d);
    // stop when the bracket is within +-2% of its midpoint frequency
    while (std::exp(hi) - std::exp(lo) > 0.04 * std::exp(0.5 * (lo + hi)) && hi - lo > 1e-6) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = gi_of(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = gi_of(d);
        }
    }
    out.f_lo_ghz = std::exp(lo);
    out.f_hi_ghz = std::exp(hi);
    out.f_star_ghz = std::exp(0.5 * (lo + hi));
    return out;
}

/// Scalar search for a noise power placing all per-room mean g_i inside the
/// target interval. Grid over log sigma^2 (plus sigma^2 = 0) minimizing the
/// squared interval violation; reports honest failure and degeneracy.
struct CalibrationResult {
    bool found = false;
    bool degenerate = false;  // g_i independent of sigma^2 (i_b == i_o)
    double sigma2_w = 0.0;
    double residual = 0.0;    // root-mean-square interval violation at the optimum
    double g_i_min = 0.0;     // per-room mean range at the chosen sigma^2
    double g_i_max = 0.0;
};

/// Per-room per-cell interference samples; i_o is scenario-global so the
/// search is closed-form per candidate.
struct RoomInterference {
    double area_m2 = 0.0;
    double aspect_ratio = 0.0;
    std::vector<double> i_b_cells;
};

inline CalibrationResult calibrate_noise_from_samples(const std::vector<RoomInterference>& rooms, double i_o,
                                                      double target_lo, double target_hi) {
    if (!(target_lo <= target_hi)) throw std::invalid_argument("invalid calibration target interval");
    if (rooms.empty()) throw std::invalid_argument("calibration requires at least one room");

    bool degenerate = true;
    for (const auto& room : rooms)
        for (double ib : room.i_b_cells)
            if (std::abs(ib - i_o) > 1e-12 * std::max(std::abs(i_o), 1e-300)) degenerate = false;

    auto eval = [&](double sigma2, double& lo, double& hi) {
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        double viol = 0.0;
        for (const auto& room : rooms) {
            double mean = 0.0;
            for (double ib : room.i_b_cells) mean += (i_o + sigma2) / (ib + sigma2);
            mean /= room.i_b_cells.size();
            lo = std::min(lo, mean);
            hi = std::max(hi, mean);
            const double over = std::max(0.0, mean - target_hi);
            const double under = std::max(0.0, target_lo - mean);
            viol += over * over + under * under;
        }
        return std::sqrt(viol / rooms.size());
    };

    CalibrationResult best;
    best.degenerate = degenerate;
    best.residual = std::numeric_limits<double>::infinity();
    std::vector<double> candidates{0.0};
    for (int i = 0; i <= 480; ++i)
        candidates.push_back(i_o * std::pow(10.0, -8.0 + i * (12.0 / 480.0)));
    for (double s2 : candidates) {
        double lo, hi;
        const double r = eval(s2, lo, hi);
        if (r < best.residual) {
            best.residual = r;
            best.sigma2_w = s2;
            best.g_i_min = lo;
            best.g_i_max = hi;
        }
    }
    best.found = best.residual == 0.0;
    return best;
}

inline CalibrationResult calibrate_noise(const SweepSpec& spec, const Scenario& s, double target_lo,
                                         double target_hi, double cell = 0.5,
                                         const QuadratureConfig& quad = {}, const EvalModels& models = {},
                                         unsigned threads = 1) {
    spec.validate();
    std::vector<RoomInterference> rooms;
    for (double area : spec.areas_m2) {
        for (double ar : spec.aspect_ratios) {
            const GridMap g = room_grid_eval(RoomSpec::from_area_ar(area, ar), s, cell, quad, models, threads);
            RoomInterference room;
            room.area_m2 = area;
            room.aspect_ratio = ar;
            room.i_b_cells.reserve(g.cells.size());
            for (const auto& c : g.cells) room.i_b_cells.push_back(c.breakdown.i_b);
            rooms.push_back(std::move(room));
        }
    }
    const OpenSpacePowers open = open_space_powers(s, quad);
    return calibrate_noise_from_samples(rooms, open.i_o, target_lo, target_hi);
}

}  // namespace bwp
