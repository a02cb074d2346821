#include <catch2/catch_amalgamated.hpp>

#include "bwp/metrics.hpp"
#include "bwp/quadrature.hpp"

using namespace bwp;

namespace {

Scenario at(double f_ghz, double r_max = 300.0) {
    Scenario s;
    s.frequency_ghz = f_ghz;
    s.r_max_m = r_max;
    return s;
}

// Closed-form oracle for a pure power law g = A r^-n: integral of
// P_T g(r) 2 pi r dr plus the clamped disk below r_min.
double power_law_disk_integral(const Scenario& s, double n, double a, double b) {
    const double A = s.amp_lin();
    const double p_t = s.p_t_w_m2();
    double total = 0.0;
    if (a < s.r_min_m) {
        const double hi = std::min(b, s.r_min_m);
        total += p_t * A * std::pow(s.r_min_m, -n) * M_PI * (hi * hi - a * a);
        a = hi;
    }
    if (b > a) {
        const double e = 2.0 - n;
        const double anti = e == 0.0 ? std::log(b / a) : (std::pow(b, e) - std::pow(a, e)) / e;
        total += p_t * A * 2.0 * M_PI * anti;
    }
    return total;
}

}  // namespace

TEST_CASE("open-space integrals match the free-space closed form") {
    // gamma = 0 turns the two-ray model into an exact r^-2 law with a known
    // antiderivative.
    for (double f : {6.0, 28.0}) {
        Scenario s = at(f);
        s.gamma_ground = 0.0;
        const double r_o = coverage_distance(PathGainModel::open_space_two_ray(), s);
        const auto got = open_space_powers(s);
        const double p_exact = power_law_disk_integral(s, 2.0, 0.0, r_o);
        const double i_exact = power_law_disk_integral(s, 2.0, r_o, s.r_max_m);
        CHECK(std::abs(got.p_o / p_exact - 1.0) < 1e-6);
        CHECK(std::abs(got.i_o / i_exact - 1.0) < 1e-6);
        CHECK(got.p_o > 0.0);
        CHECK(got.i_o > 0.0);
    }
}

TEST_CASE("open-space integrals converge under step halving") {
    Scenario s = at(28.0);  // fully coherent two-ray, fast oscillation
    QuadratureConfig q1, q2;
    q2.refine = 2;
    const auto a = open_space_powers(s, q1);
    const auto b = open_space_powers(s, q2);
    CHECK(std::abs(a.p_o / b.p_o - 1.0) < 1e-6);
    CHECK(std::abs(a.i_o / b.i_o - 1.0) < 1e-6);
}

TEST_CASE("interference tail converges only at a large enough cutoff") {
    // The coherent ground bounce decays like a^2/r^3 (a = 4 pi h^2 / lambda)
    // only beyond the breakpoint 4h^2/lambda, which is 538 m at 28 GHz: the
    // 300 m default has not converged there, a 4 km cutoff has.
    Scenario s = at(28.0, 4000.0);
    QuadratureConfig q;
    const double i_4000 = open_space_powers(s, q).i_o;
    QuadratureConfig q8;
    q8.r_max_override = 8000.0;
    Scenario s8 = s;
    s8.r_max_m = 8000.0;
    const double i_8000 = open_space_powers(s8, q8).i_o;
    CHECK(std::abs(i_8000 / i_4000 - 1.0) < 0.01);

    const double i_300 = open_space_powers(at(28.0, 300.0)).i_o;
    const double i_600 = open_space_powers(at(28.0, 600.0)).i_o;
    CHECK(i_600 / i_300 - 1.0 > 0.05);  // measured: about +21 percent

    Scenario s6 = at(6.0, 4000.0);
    const double j_4000 = open_space_powers(s6).i_o;
    Scenario s6b = at(6.0, 8000.0);
    const double j_8000 = open_space_powers(s6b).i_o;
    CHECK(std::abs(j_8000 / j_4000 - 1.0) < 0.01);
}

TEST_CASE("open-space integration fails when the coverage disk fills the domain") {
    Scenario s = at(0.5, 300.0);  // R_O = 302.7 m
    CHECK_THROWS_AS(open_space_powers(s), numerical_error);
}

TEST_CASE("polar integrator agrees with the radial one on a symmetric integrand") {
    // Empty layout: every direction is LOS, so forcing the LOS law makes the
    // 2-D polar quadrature integrate the same radially symmetric field as the
    // 1-D rule.
    Scenario s = at(28.0);
    BuildingLayout empty;
    EvalModels models;  // LOS law everywhere (no walls)
    const auto polar = building_powers(empty, s, {0.0, 0.0}, {}, models);
    const auto radial = open_space_powers(s, {}, PathGainModel::in_building_los());
    CHECK(std::abs(polar.p_b / radial.p_o - 1.0) < 1e-3);
    CHECK(std::abs(polar.i_b / radial.i_o - 1.0) < 1e-3);
    CHECK(polar.p_b_nlos == 0.0);
    CHECK(polar.i_b_nlos == 0.0);
}

TEST_CASE("no LOS interference when coverage exceeds the room diagonal") {
    Scenario s = at(6.0);
    const RoomSpec spec = RoomSpec::from_area_ar(20.0, 1.0);
    const auto room = make_rect_room(spec);
    const auto b = building_powers(room, s, {spec.width / 2, spec.length / 2});
    CHECK(b.i_b_los == 0.0);
    CHECK(b.p_b_los > 0.0);
    CHECK(b.i_b_nlos > 0.0);
}

TEST_CASE("blocking walls only remove power under the multi-wall model") {
    Scenario s = at(6.0);
    const RoomSpec spec = RoomSpec::from_area_ar(40.0, 2.0);
    const Point2D ue{spec.width / 2, spec.length / 2};

    EvalModels mw;
    mw.nlos = PathGainModel::multi_wall(1, 10.0);

    const auto open_room = building_powers(BuildingLayout{}, s, ue, {}, mw);
    const auto with_walls = building_powers(make_rect_room(spec, 10.0), s, ue, {}, mw);
    const auto hard_walls = building_powers(make_rect_room(spec, 1e9), s, ue, {}, mw);

    CHECK(with_walls.i_b <= open_room.i_b * (1.0 + 1e-9));
    CHECK(hard_walls.i_b <= with_walls.i_b * (1.0 + 1e-9));
    CHECK(hard_walls.p_b <= with_walls.p_b * (1.0 + 1e-9));
    CHECK(hard_walls.i_b_nlos == 0.0);  // nothing penetrates
}

TEST_CASE("multi-wall attenuation monotonicity over the whole breakdown") {
    Scenario s = at(28.0);
    const RoomSpec spec = RoomSpec::from_area_ar(60.0, 2.0);
    const Point2D ue{spec.width * 0.3, spec.length * 0.4};
    EvalModels mw;
    mw.nlos = PathGainModel::multi_wall(1, 10.0);
    const auto soft = building_powers(make_rect_room(spec, 5.0), s, ue, {}, mw);
    const auto hard = building_powers(make_rect_room(spec, 15.0), s, ue, {}, mw);
    CHECK(hard.p_b <= soft.p_b * (1.0 + 1e-9));
    CHECK(hard.i_b <= soft.i_b * (1.0 + 1e-9));
}

TEST_CASE("refinement decreases the quadrature error monotonically") {
    // Empty layout puts the whole plane in the LOS law, whose disk integral
    // has a closed form.
    Scenario s = at(6.0);
    BuildingLayout empty;
    const double r_l = coverage_distance(PathGainModel::in_building_los(), s);
    const double exact = power_law_disk_integral(s, s.n_los, 0.0, r_l);
    double prev_err = std::numeric_limits<double>::infinity();
    for (int refine : {1, 2, 4}) {
        QuadratureConfig q;
        q.n_radial = 16;
        q.n_theta = 36;
        q.refine = refine;
        const auto b = building_powers(empty, s, {0.0, 0.0}, q);
        const double err = std::abs(b.p_b / exact - 1.0);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("classification of transmit elements") {
    Scenario s = at(28.0);
    const CoverageSet c = coverage_set(s);
    BuildingLayout empty;

    // open space: inside/outside the coverage disk
    CHECK(classify_open_space(s, {0, 0}, {c.r_o / 2, 0}) == Region::PO);
    CHECK(classify_open_space(s, {0, 0}, {c.r_o * 1.01, 0}) == Region::IO);

    // in building, LOS just beyond coverage
    CHECK(classify_region(empty, s, {0, 0}, {c.r_l + 1e-6, 0}) == Region::IL);
    CHECK(classify_region(empty, s, {0, 0}, {c.r_l - 1e-6, 0}) == Region::PL);

    // 10x10 room at 28 GHz: same-room transmitter at 6 m is detectable LOS
    const auto room = make_rect_room(RoomSpec(10.0, 10.0));
    CHECK(classify_region(room, s, {5.0, 2.0}, {5.0, 8.0}) == Region::PL);
    // across a wall, close by: NLOS detectable
    CHECK(classify_region(room, s, {5.0, 0.5}, {5.0, -0.5}) == Region::PN);
    // across a wall, far: NLOS interference
    CHECK(classify_region(room, s, {5.0, 0.5}, {5.0, -10.0}) == Region::IN);

    // multi-wall model: penetration loss shrinks the detectable range
    EvalModels mw;
    mw.nlos = PathGainModel::multi_wall(1, 10.0);
    const double r_mw = detail::coverage_with_attenuation(s, 10.0);
    CHECK(r_mw < c.r_n);
    CHECK(classify_region(room, s, {5.0, 0.5}, {5.0, 0.5 - (r_mw + 0.05)}, mw) == Region::IN);
}

TEST_CASE("forced-model identity: no walls and one gain law give unit gains") {
    for (double f : {6.0, 28.0}) {
        Scenario s = at(f);
        BuildingLayout empty;
        EvalModels forced{PathGainModel::open_space_two_ray(), PathGainModel::open_space_two_ray()};
        const auto result = evaluate(empty, s, {0.0, 0.0}, {}, forced);
        CHECK(std::abs(result.g_p - 1.0) < 1e-3);
        CHECK(std::abs(result.g_i - 1.0) < 1e-3);
    }
}

TEST_CASE("the SINR ratio identity holds to machine precision") {
    Scenario s = at(28.0);
    s.noise_dbw = -90.0;
    const RoomSpec spec = RoomSpec::from_area_ar(60.0, 4.0);
    const auto room = make_rect_room(spec);
    QuadratureConfig q;
    q.n_theta = 180;
    q.n_radial = 64;
    const auto r = evaluate(room, s, {spec.width / 3, spec.length / 5}, q);
    const double sigma2 = s.sigma2_w();
    const double gamma_b = r.breakdown.p_b / (r.breakdown.i_b + sigma2);
    const double gamma_o = r.breakdown.p_o / (r.breakdown.i_o + sigma2);
    CHECK(r.gamma_ratio == r.g_p * r.g_i);  // bitwise by construction
    CHECK(std::abs(gamma_b / (r.gamma_ratio * gamma_o) - 1.0) < 1e-12);
}

TEST_CASE("UE outside the layout bounds is rejected") {
    Scenario s = at(6.0);
    const auto room = make_rect_room(RoomSpec(4.0, 5.0));
    CHECK_THROWS_AS(building_powers(room, s, {10.0, 10.0}), std::invalid_argument);
}
