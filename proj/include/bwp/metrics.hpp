#pragma once

#include <cmath>

#include "bwp/geometry.hpp"
#include "bwp/propagation.hpp"
#include "bwp/quadrature.hpp"

namespace bwp {

enum class Region { PO, IO, PL, PN, IL, IN };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::PO: return "PO";
        case Region::IO: return "IO";
        case Region::PL: return "PL";
        case Region::PN: return "PN";
        case Region::IL: return "IL";
        case Region::IN: return "IN";
    }
    return "?";
}

/// Open-space benchmark: intended inside the coverage disk, interference
/// outside.
inline Region classify_open_space(const Scenario& s, const Point2D& ue, const Point2D& tx) {
    const double r = std::hypot(tx.x - ue.x, tx.y - ue.y);
    const double r_o = detail::coverage_unbounded(PathGainModel::open_space_two_ray(), s);
    return r <= r_o ? Region::PO : Region::IO;
}

/// In-building classification of a transmit element: LOS/NLOS via the wall
/// geometry, intended/interference via the matching coverage radius (for a
/// multi-wall NLOS model the radius shrinks with the link's penetration
/// loss).
inline Region classify_region(const BuildingLayout& layout, const Scenario& s, const Point2D& ue,
                              const Point2D& tx, const EvalModels& models = {}) {
    const double r = std::hypot(tx.x - ue.x, tx.y - ue.y);
    const CrossingInfo ci = crossing_info(layout, tx, ue);
    if (ci.count == 0) {
        const double r_l = detail::coverage_unbounded(models.los, s);
        return r <= r_l ? Region::PL : Region::IL;
    }
    double r_n;
    if (models.nlos.tag == GainModel::multi_wall) {
        r_n = detail::coverage_with_attenuation(s, ci.attenuation_db);
    } else {
        r_n = detail::coverage_unbounded(models.nlos, s);
    }
    return r <= r_n ? Region::PN : Region::IN;
}

/// Per-UE record of the four powers and the two gains.
struct BwpResult {
    Point2D ue;
    PowerBreakdown breakdown;
    double g_p = 0.0;
    double g_i = 0.0;
    double gamma_ratio = 0.0;  // g_p * g_i, the SINR change factor
};

inline BwpResult combine_result(const Point2D& ue, const Scenario& s, const OpenSpacePowers& open,
                                PowerBreakdown building) {
    building.p_o = open.p_o;
    building.i_o = open.i_o;
    BwpResult r;
    r.ue = ue;
    r.breakdown = building;
    const double sigma2 = s.sigma2_w();
    r.g_p = building.p_b / building.p_o;
    r.g_i = (building.i_o + sigma2) / (building.i_b + sigma2);
    r.gamma_ratio = r.g_p * r.g_i;
    return r;
}

inline BwpResult evaluate(const BuildingLayout& layout, const Scenario& s, const Point2D& ue,
                          const QuadratureConfig& quad = {}, const EvalModels& models = {}) {
    const OpenSpacePowers open = open_space_powers(s, quad);
    return combine_result(ue, s, open, building_powers(layout, s, ue, quad, models));
}

/// Shared-benchmark variant for grid sweeps: P_O and I_O are UE-independent.
inline BwpResult evaluate_with_open(const BuildingLayout& layout, const Scenario& s, const Point2D& ue,
                                    const OpenSpacePowers& open, const QuadratureConfig& quad = {},
                                    const EvalModels& models = {}) {
    return combine_result(ue, s, open, building_powers(layout, s, ue, quad, models));
}

}  // namespace bwp
