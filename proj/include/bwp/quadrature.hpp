#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "bwp/common.hpp"
#include "bwp/geometry.hpp"
#include "bwp/propagation.hpp"

namespace bwp {

/// Controls for the polar / radial integration of the transmitter continuum.
struct QuadratureConfig {
    int n_radial = 128;  // geometric radial cells between r_min and r_max
    int n_theta = 720;   // uniform angular samples (even keeps mirror symmetry exact)
    int refine = 1;      // multiplies both resolutions
    double r_max_override = 0.0;  // 0 -> scenario r_max
    int osc_cells_per_cycle = 16;  // radial subdivision of oscillatory (two-ray) pieces
    int n_radial_1d = 64;          // per-segment base for the 1-D open-space rule

    void validate() const {
        if (n_radial < 2 || n_theta < 4 || refine < 1 || n_radial_1d < 4 || osc_cells_per_cycle < 2)
            throw std::invalid_argument("quadrature resolutions must be positive");
    }
    double r_max(const Scenario& s) const { return r_max_override > 0.0 ? r_max_override : s.r_max_m; }
    int radial_cells() const { return n_radial * refine; }
    int theta_cells() const { return n_theta * refine; }
};

struct OpenSpacePowers {
    double p_o = 0.0;
    double i_o = 0.0;
};

struct PowerBreakdown {
    double p_o = 0.0;
    double i_o = 0.0;
    double p_b = 0.0;
    double i_b = 0.0;
    double p_b_los = 0.0;
    double p_b_nlos = 0.0;
    double i_b_los = 0.0;
    double i_b_nlos = 0.0;
};

/// Gain models applied to LOS / NLOS links inside the building scenario.
/// Overridable so identity tests can force both to the open-space model;
/// a multi_wall NLOS model switches the integrator to per-link attenuation
/// sums.
struct EvalModels {
    PathGainModel los = PathGainModel::in_building_los();
    PathGainModel nlos = PathGainModel::in_building_nlos();
};

namespace detail {

// Closed-form envelope coverage with no r_max cap; 0 when even the clamped
// near field is undetectable.
inline double coverage_unbounded(const PathGainModel& m, const Scenario& s) {
    double budget = s.budget_db();
    double slope = 20.0;
    switch (m.tag) {
        case GainModel::open_space_two_ray: slope = 20.0; break;
        case GainModel::in_building_los: slope = 10.0 * s.n_los; break;
        case GainModel::in_building_nlos: slope = 10.0 * s.n_nlos; break;
        case GainModel::multi_wall:
            slope = 10.0 * s.n_los;
            budget -= m.wall_count * m.wall_loss_db;
            break;
    }
    const double r = std::pow(10.0, (budget - s.intercept_db()) / slope);
    return r < s.r_min_m ? 0.0 : r;
}

// Detectability range of the LOS distance law reduced by att_db of wall
// penetration (multi-wall links).
inline double coverage_with_attenuation(const Scenario& s, double att_db) {
    const double r = std::pow(10.0, (s.budget_db() - att_db - s.intercept_db()) / (10.0 * s.n_los));
    return r < s.r_min_m ? 0.0 : r;
}

inline bool oscillatory(const PathGainModel& m) { return m.tag == GainModel::open_space_two_ray; }

// Ground-bounce excess path length; its change across a span counts
// oscillation cycles of the two-ray integrand.
inline double bounce_excess(const Scenario& s, double r) {
    const double two_h = 2.0 * s.height_m;
    return std::sqrt(r * r + two_h * two_h) - r;
}

inline double osc_cycles(const Scenario& s, double a, double b) {
    return (bounce_excess(s, a) - bounce_excess(s, b)) / s.lambda_m();
}

// integral of P_T * G(r) * 2*pi*r dr over [a, b], b > a >= r_min. The span
// is chunked geometrically (the integrand decays over decades and the
// two-ray cycle length grows like r^2), then each chunk gets a composite
// Simpson rule sized by its local oscillation count.
inline double radial_segment_1d(const PathGainModel& m, const Scenario& s, double a, double b, int n_base,
                                int per_cycle) {
    const int chunks = std::max(16, n_base / 4);
    const double ratio = std::log(b / a) / chunks;
    double acc = 0.0;
    for (int c = 0; c < chunks; ++c) {
        const double lo = c == 0 ? a : a * std::exp(ratio * c);
        const double hi = c + 1 == chunks ? b : a * std::exp(ratio * (c + 1));
        int n = 16;
        if (oscillatory(m)) n = std::max(n, static_cast<int>(std::ceil(osc_cycles(s, lo, hi) * per_cycle)));
        if (n % 2) ++n;
        const double h = (hi - lo) / n;
        double chunk = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double r = (i == n) ? hi : lo + i * h;
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            chunk += w * path_gain_lin(m, s, r) * r;
        }
        acc += chunk * h / 3.0;
    }
    return s.p_t_w_m2() * 2.0 * M_PI * acc;
}

}  // namespace detail

/// P_O and I_O: radial quadrature of the open-space continuum inside and
/// outside the coverage disk. The region below r_min integrates the clamped
/// gain exactly.
inline OpenSpacePowers open_space_powers(const Scenario& s, const QuadratureConfig& quad = {},
                                         const PathGainModel& model = PathGainModel::open_space_two_ray()) {
    s.validate();
    quad.validate();
    const double r_max = quad.r_max(s);
    const double r_cov = coverage_distance(model, [&] {
        Scenario sc = s;
        sc.r_max_m = r_max;
        return sc;
    }());
    if (r_cov >= r_max) throw numerical_error("open-space coverage radius reaches r_max");

    const int n_base = quad.n_radial_1d * quad.refine;
    const int per_cycle = 48 * quad.refine;
    OpenSpacePowers out;
    const double p_t = s.p_t_w_m2();

    auto clamped_disk = [&](double a, double b) {
        return p_t * path_gain_lin(model, s, s.r_min_m) * M_PI * (b * b - a * a);
    };

    // Intended region [0, r_cov].
    if (r_cov > 0.0) {
        const double c0 = std::min(r_cov, s.r_min_m);
        out.p_o += clamped_disk(0.0, c0);
        if (r_cov > s.r_min_m)
            out.p_o += detail::radial_segment_1d(model, s, s.r_min_m, r_cov, n_base, per_cycle);
    }
    // Interference region [r_cov, r_max].
    double a = r_cov;
    if (a < s.r_min_m) {
        out.i_o += clamped_disk(a, s.r_min_m);
        a = s.r_min_m;
    }
    out.i_o += detail::radial_segment_1d(model, s, a, r_max, n_base, per_cycle);
    return out;
}

/// Polar quadrature of the in-building continuum around the UE. Radial cells
/// follow a geometric base grid split at every wall crossing of each ray and
/// at the coverage radii, so the integrand is smooth inside each cell;
/// midpoint rule within cells. Deterministic accumulation order.
inline PowerBreakdown building_powers(const BuildingLayout& layout, const Scenario& s, const Point2D& ue,
                                      const QuadratureConfig& quad = {}, const EvalModels& models = {}) {
    s.validate();
    quad.validate();
    if (!finite(ue)) throw std::invalid_argument("UE location must be finite");
    if (!layout.contains(ue)) throw std::invalid_argument("UE location outside layout bounds");

    const double r_max = quad.r_max(s);
    const double p_t = s.p_t_w_m2();
    const bool multiwall = models.nlos.tag == GainModel::multi_wall;
    const double r_los = detail::coverage_unbounded(models.los, s);
    const double r_nlos = detail::coverage_unbounded(models.nlos, s);

    // Base radial edges: clamp cell, then geometric spacing, with the
    // angle-independent coverage radii spliced in.
    std::vector<double> base;
    base.push_back(0.0);
    if (s.r_min_m < r_max) base.push_back(s.r_min_m);
    const int n_cells = quad.radial_cells();
    const double ratio = std::log(r_max / s.r_min_m) / n_cells;
    for (int i = 1; i <= n_cells; ++i) base.push_back(s.r_min_m * std::exp(ratio * i));
    base.back() = r_max;
    for (double rc : {r_los, r_nlos}) {
        if (rc > 0.0 && rc < r_max) base.push_back(rc);
    }
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-12; }),
               base.end());

    // Cache of power-law gains at base-cell midpoints (refreshed only for
    // cells split by wall hits).
    struct CellGain {
        double los = 0.0;
        double nlos = 0.0;
    };
    std::vector<CellGain> cache(base.size() - 1);
    const bool los_cacheable = !detail::oscillatory(models.los);
    const bool nlos_cacheable = !detail::oscillatory(models.nlos);
    for (std::size_t i = 0; i + 1 < base.size(); ++i) {
        const double m = 0.5 * (base[i] + base[i + 1]);
        if (los_cacheable) cache[i].los = path_gain_lin(models.los, s, m);
        if (nlos_cacheable)
            cache[i].nlos = multiwall ? path_gain_lin(PathGainModel::in_building_los(), s, m)
                                      : path_gain_lin(models.nlos, s, m);
    }

    PowerBreakdown out;
    const int n_theta = quad.theta_cells();
    const double d_theta = 2.0 * M_PI / n_theta;
    std::vector<RayHit> hits;

    for (int k = 0; k < n_theta; ++k) {
        const double theta = (k + 0.5) * d_theta;
        const double dx = std::cos(theta);
        const double dy = std::sin(theta);
        ray_wall_hits(layout, ue, dx, dy, r_max, hits);

        double pb_l = 0.0, pb_n = 0.0, ib_l = 0.0, ib_n = 0.0;
        std::size_t cell = 0;     // index into base grid
        std::size_t next_hit = 0; // hits with t <= current position
        double att_sum = 0.0;
        int n_crossed = 0;

        // One smooth piece: constant classification inputs, known base cell.
        // `partial` marks pieces that do not cover their base cell, which
        // invalidates the midpoint cache.
        auto eval_smooth = [&](double a, double b, std::size_t base_cell, bool partial) {
            if (b - a <= 1e-12) return;
            const bool los = n_crossed == 0;
            const PathGainModel& model = los ? models.los : models.nlos;
            const bool osc = detail::oscillatory(model);
            int pieces = 1;
            if (osc && b > s.r_min_m) {
                const double cyc = detail::osc_cycles(s, std::max(a, s.r_min_m), b);
                pieces = std::max(1, static_cast<int>(std::ceil(cyc * quad.osc_cells_per_cycle * quad.refine)));
            }
            const double step = (b - a) / pieces;
            for (int p = 0; p < pieces; ++p) {
                const double lo = a + p * step;
                const double hi = (p + 1 == pieces) ? b : lo + step;
                const double m = 0.5 * (lo + hi);
                double w;  // integral of p_t * g(r) * r dr over the piece, times d_theta
                if (osc) {
                    // Simpson in g(r)*r: the midpoint rule cannot track the
                    // two-ray phase even on sub-cycle pieces.
                    const double fl = path_gain_lin(model, s, lo > 0.0 ? lo : m) * lo;
                    const double fm = path_gain_lin(model, s, m) * m;
                    const double fh = path_gain_lin(model, s, hi) * hi;
                    w = p_t * (fl + 4.0 * fm + fh) / 6.0 * (hi - lo) * d_theta;
                } else {
                    double g;
                    if (!partial && pieces == 1 && ((los && los_cacheable) || (!los && nlos_cacheable))) {
                        g = los ? cache[base_cell].los : cache[base_cell].nlos;
                        if (!los && multiwall) g *= db_to_lin(-att_sum);
                    } else if (!los && multiwall) {
                        g = path_gain_lin(PathGainModel::in_building_los(), s, m) * db_to_lin(-att_sum);
                    } else {
                        g = path_gain_lin(model, s, m);
                    }
                    w = p_t * g * 0.5 * (hi * hi - lo * lo) * d_theta;
                }
                const double r_cov = los ? r_los : (multiwall ? detail::coverage_with_attenuation(s, att_sum) : r_nlos);
                if (los) {
                    (m <= r_cov ? pb_l : ib_l) += w;
                } else {
                    (m <= r_cov ? pb_n : ib_n) += w;
                }
            }
        };

        // Splits a piece at the attenuation-dependent multi-wall coverage
        // radius, which is not part of the shared base grid.
        auto eval_piece = [&](double a, double b, std::size_t base_cell, bool partial) {
            if (multiwall && n_crossed > 0) {
                const double rc = detail::coverage_with_attenuation(s, att_sum);
                if (rc > a + 1e-12 && rc < b - 1e-12) {
                    eval_smooth(a, rc, base_cell, true);
                    eval_smooth(rc, b, base_cell, true);
                    return;
                }
            }
            eval_smooth(a, b, base_cell, partial);
        };

        double pos = 0.0;
        while (pos < r_max - 1e-12) {
            const double cell_end = base[cell + 1];
            // Consume any wall hit at the current position.
            while (next_hit < hits.size() && hits[next_hit].t <= pos + 1e-12) {
                att_sum += hits[next_hit].attenuation_db;
                ++n_crossed;
                ++next_hit;
            }
            double piece_end = cell_end;
            bool at_hit = false;
            if (next_hit < hits.size() && hits[next_hit].t < cell_end - 1e-12) {
                piece_end = hits[next_hit].t;
                at_hit = true;
            }
            const bool partial = at_hit || pos > base[cell] + 1e-12;
            eval_piece(pos, piece_end, cell, partial);
            pos = piece_end;
            if (!at_hit) ++cell;
        }

        out.p_b_los += pb_l;
        out.p_b_nlos += pb_n;
        out.i_b_los += ib_l;
        out.i_b_nlos += ib_n;
    }

    out.p_b = out.p_b_los + out.p_b_nlos;
    out.i_b = out.i_b_los + out.i_b_nlos;
    return out;
}

}  // namespace bwp
