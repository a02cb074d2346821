#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bwp/common.hpp"

namespace bwp {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

inline bool finite(const Point2D& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline bool lex_less(const Point2D& a, const Point2D& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

/// Zero-thickness segment with a per-crossing penetration loss.
struct Wall {
    Point2D a;
    Point2D b;
    double attenuation_db = 10.0;
};

struct Bounds {
    Point2D lo;
    Point2D hi;

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    bool contains(const Point2D& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
};

/// Immutable set of walls; all queries are pure and safe to share across
/// threads. An empty wall list models open space.
class BuildingLayout {
  public:
    BuildingLayout() = default;

    explicit BuildingLayout(std::vector<Wall> walls) : walls_(std::move(walls)) {
        for (const auto& w : walls_) {
            if (!finite(w.a) || !finite(w.b))
                throw std::invalid_argument("wall endpoints must be finite");
            if (w.a.x == w.b.x && w.a.y == w.b.y)
                throw std::invalid_argument("wall endpoints must be distinct");
            if (!(w.attenuation_db >= 0.0))
                throw std::invalid_argument("wall attenuation must be >= 0 dB");
        }
        if (!walls_.empty()) {
            bounds_.lo = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
            bounds_.hi = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
            for (const auto& w : walls_) {
                for (const Point2D* p : {&w.a, &w.b}) {
                    bounds_.lo.x = std::min(bounds_.lo.x, p->x);
                    bounds_.lo.y = std::min(bounds_.lo.y, p->y);
                    bounds_.hi.x = std::max(bounds_.hi.x, p->x);
                    bounds_.hi.y = std::max(bounds_.hi.y, p->y);
                }
            }
        }
    }

    const std::vector<Wall>& walls() const { return walls_; }
    bool empty() const { return walls_.empty(); }
    const Bounds& bounds() const { return bounds_; }

    /// Open space accepts any UE location.
    bool contains(const Point2D& p) const { return walls_.empty() || bounds_.contains(p); }

  private:
    std::vector<Wall> walls_;
    Bounds bounds_{};
};

namespace detail {

// Side of p relative to the directed line a->b, classified by signed
// distance against geom_tol. 0 means "on the line".
inline int line_side(const Point2D& a, const Point2D& b, const Point2D& p) {
    const double ex = b.x - a.x;
    const double ey = b.y - a.y;
    const double cross = ex * (p.y - a.y) - ey * (p.x - a.x);
    const double len = std::sqrt(ex * ex + ey * ey);
    const double dist = cross / len;
    if (dist > geom_tol) return 1;
    if (dist < -geom_tol) return -1;
    return 0;
}

inline int push_positive(int s) { return s == 0 ? 1 : s; }

// Crossing predicate with the half-open degeneracy rule: points exactly on
// a line are counted as lying on its positive side, and both segments are
// taken in canonical (lexicographic) endpoint order first so the result is
// independent of input orientation. A link through a corner shared by two
// walls therefore crosses exactly one of them. A link collinear with a
// wall and overlapping it counts as one crossing.
inline bool segments_cross(Point2D p, Point2D q, Point2D a, Point2D b) {
    if (lex_less(q, p)) std::swap(p, q);
    if (lex_less(b, a)) std::swap(a, b);

    const int sa = line_side(p, q, a);
    const int sb = line_side(p, q, b);
    if (sa == 0 && sb == 0) {
        // Collinear: one crossing iff the 1-D ranges overlap.
        const double lx = std::abs(q.x - p.x), ly = std::abs(q.y - p.y);
        if (lx >= ly)
            return std::max(p.x, a.x) <= std::min(q.x, b.x) + geom_tol;
        return std::max(p.y, a.y) <= std::min(q.y, b.y) + geom_tol;
    }
    if (push_positive(sa) == push_positive(sb)) return false;
    const int sp = push_positive(line_side(a, b, p));
    const int sq = push_positive(line_side(a, b, q));
    return sp != sq;
}

}  // namespace detail

struct CrossingInfo {
    int count = 0;
    double attenuation_db = 0.0;  // sum over crossed walls
};

inline CrossingInfo crossing_info(const BuildingLayout& layout, const Point2D& tx, const Point2D& ue) {
    CrossingInfo info;
    if (tx.x == ue.x && tx.y == ue.y) return info;
    for (const auto& w : layout.walls()) {
        if (detail::segments_cross(tx, ue, w.a, w.b)) {
            ++info.count;
            info.attenuation_db += w.attenuation_db;
        }
    }
    return info;
}

/// Number of walls properly crossed by the open segment tx-ue.
inline int crossing_count(const BuildingLayout& layout, const Point2D& tx, const Point2D& ue) {
    return crossing_info(layout, tx, ue).count;
}

inline bool is_los(const BuildingLayout& layout, const Point2D& tx, const Point2D& ue) {
    return crossing_count(layout, tx, ue) == 0;
}

/// Wall hit along the ray origin + t*dir, 0 < t <= t_max.
struct RayHit {
    double t = 0.0;
    double attenuation_db = 0.0;
};

/// All wall crossings along a ray, sorted by distance. Uses the same
/// crossing predicate as crossing_count, so prefix counts over the hit list
/// agree with point classification along the ray.
inline void ray_wall_hits(const BuildingLayout& layout, const Point2D& origin, double dir_x, double dir_y,
                          double t_max, std::vector<RayHit>& out) {
    out.clear();
    const Point2D end{origin.x + dir_x * t_max, origin.y + dir_y * t_max};
    for (const auto& w : layout.walls()) {
        if (!detail::segments_cross(origin, end, w.a, w.b)) continue;
        const double ex = w.b.x - w.a.x;
        const double ey = w.b.y - w.a.y;
        double t;
        if (detail::line_side(origin, end, w.a) == 0 && detail::line_side(origin, end, w.b) == 0) {
            // Collinear overlap: first touch is the nearer projected endpoint.
            const double ta = (w.a.x - origin.x) * dir_x + (w.a.y - origin.y) * dir_y;
            const double tb = (w.b.x - origin.x) * dir_x + (w.b.y - origin.y) * dir_y;
            t = std::min(ta, tb);
        } else {
            const double den = dir_x * ey - dir_y * ex;
            t = ((w.a.x - origin.x) * ey - (w.a.y - origin.y) * ex) / den;
        }
        t = std::clamp(t, 0.0, t_max);
        out.push_back({t, w.attenuation_db});
    }
    std::sort(out.begin(), out.end(), [](const RayHit& l, const RayHit& r) { return l.t < r.t; });
}

/// Rectangular room, corner at the origin, length >= width.
struct RoomSpec {
    double width = 0.0;
    double length = 0.0;

    RoomSpec(double w, double l) : width(w), length(l) {
        if (!(w > 0.0) || !(l > 0.0)) throw std::invalid_argument("room dimensions must be positive");
        if (l < w) throw std::invalid_argument("room length must be >= width");
    }

    static RoomSpec from_area_ar(double area_m2, double aspect_ratio) {
        if (!(area_m2 > 0.0)) throw std::invalid_argument("room area must be positive");
        if (!(aspect_ratio >= 1.0)) throw std::invalid_argument("aspect ratio must be >= 1");
        const double w = std::sqrt(area_m2 / aspect_ratio);
        return RoomSpec(w, w * aspect_ratio);
    }

    double area() const { return width * length; }
    double aspect_ratio() const { return length / width; }
    double diagonal() const { return std::hypot(width, length); }
};

inline BuildingLayout make_rect_room(const RoomSpec& spec, double wall_attenuation_db = 10.0) {
    const double w = spec.width, l = spec.length;
    std::vector<Wall> walls = {
        {{0.0, 0.0}, {w, 0.0}, wall_attenuation_db},
        {{w, 0.0}, {w, l}, wall_attenuation_db},
        {{w, l}, {0.0, l}, wall_attenuation_db},
        {{0.0, l}, {0.0, 0.0}, wall_attenuation_db},
    };
    return BuildingLayout(std::move(walls));
}

/// Parametric office floor: blocks of [room row, corridor, room row] stacked
/// n_corridors times, rooms_per_row rooms across. Defaults approximate a
/// 100 m x 50 m office floor with two corridors.
struct OfficeParams {
    int rooms_per_row = 10;
    double room_w = 10.0;
    double room_l = 10.0;
    double corridor_w = 5.0;
    int n_corridors = 2;
    double wall_attenuation_db = 10.0;

    void validate() const {
        if (rooms_per_row < 1 || n_corridors < 1)
            throw std::invalid_argument("office generator requires at least one room per row and one corridor");
        if (!(room_w > 0.0) || !(room_l > 0.0) || !(corridor_w > 0.0))
            throw std::invalid_argument("office dimensions must be positive");
        if (!(wall_attenuation_db >= 0.0))
            throw std::invalid_argument("wall attenuation must be >= 0 dB");
    }

    double total_width() const { return rooms_per_row * room_w; }
    double total_height() const { return n_corridors * (2.0 * room_l + corridor_w); }
};

inline BuildingLayout make_office_layout(const OfficeParams& p = {}) {
    p.validate();
    const double w = p.total_width();
    const double h = p.total_height();
    std::vector<Wall> walls;

    std::vector<double> levels{0.0};
    double y = 0.0;
    for (int b = 0; b < p.n_corridors; ++b) {
        levels.push_back(y + p.room_l);
        levels.push_back(y + p.room_l + p.corridor_w);
        levels.push_back(y + 2.0 * p.room_l + p.corridor_w);
        y += 2.0 * p.room_l + p.corridor_w;
    }
    for (double yy : levels) walls.push_back({{0.0, yy}, {w, yy}, p.wall_attenuation_db});

    walls.push_back({{0.0, 0.0}, {0.0, h}, p.wall_attenuation_db});
    walls.push_back({{w, 0.0}, {w, h}, p.wall_attenuation_db});

    // Partitions between rooms exist only inside room rows, never across a
    // corridor.
    y = 0.0;
    for (int b = 0; b < p.n_corridors; ++b) {
        for (double row_y : {y, y + p.room_l + p.corridor_w}) {
            for (int j = 1; j < p.rooms_per_row; ++j) {
                const double x = j * p.room_w;
                walls.push_back({{x, row_y}, {x, row_y + p.room_l}, p.wall_attenuation_db});
            }
        }
        y += 2.0 * p.room_l + p.corridor_w;
    }
    return BuildingLayout(std::move(walls));
}

/// Room/corridor footprints of the office generator, for per-unit reporting.
struct UnitRect {
    std::string label;
    bool corridor = false;
    Bounds rect;
};

inline std::vector<UnitRect> office_units(const OfficeParams& p = {}) {
    p.validate();
    std::vector<UnitRect> units;
    const double w = p.total_width();
    double y = 0.0;
    int room_idx = 0;
    for (int b = 0; b < p.n_corridors; ++b) {
        for (double row_y : {y, y + p.room_l + p.corridor_w}) {
            for (int j = 0; j < p.rooms_per_row; ++j) {
                UnitRect u;
                u.label = "room_" + std::to_string(room_idx++);
                u.rect = {{j * p.room_w, row_y}, {(j + 1) * p.room_w, row_y + p.room_l}};
                units.push_back(std::move(u));
            }
        }
        UnitRect c;
        c.label = "corridor_" + std::to_string(b);
        c.corridor = true;
        c.rect = {{0.0, y + p.room_l}, {w, y + p.room_l + p.corridor_w}};
        units.push_back(std::move(c));
        y += 2.0 * p.room_l + p.corridor_w;
    }
    return units;
}

}  // namespace bwp
