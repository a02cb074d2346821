#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bwp/common.hpp"

namespace bwp {

/// Radio configuration. Powers are area densities: P_T and P_th in dBW/m^2,
/// sigma^2 (noise_dbw) in dBW; -inf noise means a noise-free ratio.
struct Scenario {
    double frequency_ghz = 6.0;
    double p_t_dbw_m2 = -34.0;
    double p_th_dbw_m2 = -110.0;
    double noise_dbw = -std::numeric_limits<double>::infinity();
    double n_los = 1.73;
    double n_nlos = 3.19;
    double height_m = 1.2;
    double r_min_m = 0.5;
    double r_max_m = 300.0;
    double gamma_ground = -1.0;

    void validate() const {
        if (!(frequency_ghz >= 0.5 && frequency_ghz <= 100.0))
            throw std::invalid_argument("frequency_ghz must be in [0.5, 100]");
        if (!(p_t_dbw_m2 > p_th_dbw_m2))
            throw std::invalid_argument("transmit density must exceed the detectability threshold");
        if (!(n_los > 0.0) || !(n_nlos > 0.0))
            throw std::invalid_argument("path-loss exponents must be positive");
        if (!(height_m >= 0.0)) throw std::invalid_argument("antenna height must be >= 0");
        if (!(r_min_m > 0.0) || !(r_min_m < r_max_m))
            throw std::invalid_argument("requires 0 < r_min_m < r_max_m");
        if (!(gamma_ground >= -1.0 && gamma_ground <= 0.0))
            throw std::invalid_argument("gamma_ground must be in [-1, 0]");
        if (std::isnan(noise_dbw)) throw std::invalid_argument("noise_dbw must not be NaN");
    }

    /// 1 m free-space intercept shared by every model, in dB of loss.
    double intercept_db() const { return 32.4 + 20.0 * std::log10(frequency_ghz); }
    double budget_db() const { return p_t_dbw_m2 - p_th_dbw_m2; }
    double p_t_w_m2() const { return db_to_lin(p_t_dbw_m2); }
    double sigma2_w() const {
        return std::isinf(noise_dbw) && noise_dbw < 0 ? 0.0 : db_to_lin(noise_dbw);
    }
    /// Linear gain at 1 m.
    double amp_lin() const { return db_to_lin(-intercept_db()); }
    /// Wavelength derived from the intercept so that the gamma=0 two-ray
    /// limit coincides with the free-space law exactly.
    double lambda_m() const { return 4.0 * M_PI * std::sqrt(amp_lin()); }
};

enum class GainModel { open_space_two_ray, in_building_los, in_building_nlos, multi_wall };

/// Tagged path-gain family. multi_wall carries a fixed crossing count and a
/// per-wall loss for standalone evaluation; integrators substitute the
/// actual per-link attenuation sum.
struct PathGainModel {
    GainModel tag = GainModel::in_building_los;
    int wall_count = 0;
    double wall_loss_db = 10.0;

    static PathGainModel open_space_two_ray() { return {GainModel::open_space_two_ray}; }
    static PathGainModel in_building_los() { return {GainModel::in_building_los}; }
    static PathGainModel in_building_nlos() { return {GainModel::in_building_nlos}; }
    static PathGainModel multi_wall(int k, double per_wall_db = 10.0) {
        if (k < 1) throw std::invalid_argument("multi_wall requires k >= 1");
        return {GainModel::multi_wall, k, per_wall_db};
    }
};

namespace detail {

/// Coherent two-ray sum: direct ray at the horizontal separation (equal
/// antenna heights) plus a ground bounce over the path sqrt(r^2 + (2h)^2).
inline double two_ray_gain_lin(const Scenario& s, double r) {
    const double d1 = r;
    const double two_h = 2.0 * s.height_m;
    const double d2 = std::sqrt(r * r + two_h * two_h);
    const double k = 2.0 * M_PI / s.lambda_m();
    const double re = std::cos(k * d1) / d1 + s.gamma_ground * std::cos(k * d2) / d2;
    const double im = std::sin(k * d1) / d1 + s.gamma_ground * std::sin(k * d2) / d2;
    return s.amp_lin() * (re * re + im * im);
}

inline double power_law_gain_lin(const Scenario& s, double r, double exponent) {
    return s.amp_lin() * std::pow(r, -exponent);
}

}  // namespace detail

/// Linear path gain at separation r (clamped below r_min_m).
inline double path_gain_lin(const PathGainModel& m, const Scenario& s, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("path gain requires r > 0");
    const double rc = std::max(r, s.r_min_m);
    switch (m.tag) {
        case GainModel::open_space_two_ray:
            return detail::two_ray_gain_lin(s, rc);
        case GainModel::in_building_los:
            return detail::power_law_gain_lin(s, rc, s.n_los);
        case GainModel::in_building_nlos:
            return detail::power_law_gain_lin(s, rc, s.n_nlos);
        case GainModel::multi_wall:
            return detail::power_law_gain_lin(s, rc, s.n_los) *
                   db_to_lin(-(m.wall_count * m.wall_loss_db));
    }
    throw std::logic_error("unreachable");
}

inline double path_gain_db(const PathGainModel& m, const Scenario& s, double r) {
    return lin_to_db(path_gain_lin(m, s, r));
}

/// Monotone envelope in dB: the two-ray case collapses to free space, the
/// power laws are their own envelope.
inline double envelope_gain_db(const PathGainModel& m, const Scenario& s, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("path gain requires r > 0");
    const double rc = std::max(r, s.r_min_m);
    switch (m.tag) {
        case GainModel::open_space_two_ray:
            return -(s.intercept_db() + 20.0 * std::log10(rc));
        case GainModel::in_building_los:
            return -(s.intercept_db() + 10.0 * s.n_los * std::log10(rc));
        case GainModel::in_building_nlos:
            return -(s.intercept_db() + 10.0 * s.n_nlos * std::log10(rc));
        case GainModel::multi_wall:
            return -(s.intercept_db() + 10.0 * s.n_los * std::log10(rc)) - m.wall_count * m.wall_loss_db;
    }
    throw std::logic_error("unreachable");
}

/// Range R_s where P_T G_s(R_s) = P_th on the monotone envelope. Returns 0
/// when even the clamped near field is below threshold.
inline double coverage_distance(const PathGainModel& m, const Scenario& s) {
    s.validate();
    double budget = s.budget_db();
    double slope;  // dB per decade
    switch (m.tag) {
        case GainModel::open_space_two_ray:
            slope = 20.0;
            break;
        case GainModel::in_building_los:
            slope = 10.0 * s.n_los;
            break;
        case GainModel::in_building_nlos:
            slope = 10.0 * s.n_nlos;
            break;
        case GainModel::multi_wall:
            slope = 10.0 * s.n_los;
            budget -= m.wall_count * m.wall_loss_db;
            break;
        default:
            throw std::logic_error("unreachable");
    }
    const double r = std::pow(10.0, (budget - s.intercept_db()) / slope);
    if (r > s.r_max_m)
        throw numerical_error("coverage distance exceeds r_max_m: link budget unreachable");
    if (r < s.r_min_m && s.intercept_db() + slope * std::log10(s.r_min_m) > budget + 1e-12) {
        // Clamped gain at r_min is already below threshold: empty coverage.
        return 0.0;
    }
    return r;
}

struct CoverageSet {
    double r_o = 0.0;
    double r_l = 0.0;
    double r_n = 0.0;
};

inline CoverageSet coverage_set(const Scenario& s) {
    return {coverage_distance(PathGainModel::open_space_two_ray(), s),
            coverage_distance(PathGainModel::in_building_los(), s),
            coverage_distance(PathGainModel::in_building_nlos(), s)};
}

}  // namespace bwp
