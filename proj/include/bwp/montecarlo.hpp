#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bwp/common.hpp"
#include "bwp/metrics.hpp"

namespace bwp {

/// Finite-N random-deployment estimator of the continuum integrals. N
/// elements uniform on the disk of radius r_max around the UE, each carrying
/// transmit power P_T * area / N; classified and attenuated exactly as in
/// the quadrature path.
struct McConfig {
    std::uint64_t n_elements = 1000000;
    std::uint64_t seed = 1;
    int repetitions = 20;

    void validate() const {
        if (n_elements < 1) throw std::invalid_argument("n_elements must be >= 1");
        if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    }
};

struct McEstimate {
    PowerBreakdown mean;
    PowerBreakdown std_error;
    std::vector<PowerBreakdown> per_repetition;
};

namespace detail {

// Repetition substreams: mt19937_64 seeded from splitmix64 of (seed, rep).
// Uniform doubles are built from the top 53 bits so results do not depend
// on the standard library's distribution implementation.
class McRng {
  public:
    McRng(std::uint64_t seed, std::uint64_t rep) : gen_(splitmix64(seed ^ splitmix64(rep + 1))) {}
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 gen_;
};

}  // namespace detail

inline McEstimate mc_powers(const BuildingLayout& layout, const Scenario& s, const Point2D& ue,
                            const McConfig& cfg, const QuadratureConfig& quad = {},
                            const EvalModels& models = {}, unsigned threads = 1) {
    s.validate();
    cfg.validate();
    const double r_max = quad.r_max(s);
    const double area = M_PI * r_max * r_max;
    const double p_t = s.p_t_w_m2();
    const double w_elem = p_t * area / static_cast<double>(cfg.n_elements);

    const double r_o = detail::coverage_unbounded(PathGainModel::open_space_two_ray(), s);
    const double r_l = detail::coverage_unbounded(models.los, s);
    const double r_n_fixed = detail::coverage_unbounded(models.nlos, s);
    const bool multiwall = models.nlos.tag == GainModel::multi_wall;
    const PathGainModel open_model = PathGainModel::open_space_two_ray();
    const PathGainModel los_law = PathGainModel::in_building_los();

    std::vector<PowerBreakdown> reps(cfg.repetitions);
    parallel_for(cfg.repetitions, threads, [&](std::size_t rep) {
        detail::McRng rng(cfg.seed, rep);
        PowerBreakdown acc;
        for (std::uint64_t i = 0; i < cfg.n_elements; ++i) {
            const double u1 = rng.uniform();
            const double u2 = rng.uniform();
            const double r = r_max * std::sqrt(u1);
            const double theta = 2.0 * M_PI * u2;
            const Point2D tx{ue.x + r * std::cos(theta), ue.y + r * std::sin(theta)};
            if (r <= 0.0) continue;  // coincident element carries no defined direction

            // Open-space benchmark sees the same deployment.
            const double g_o = path_gain_lin(open_model, s, r);
            (r <= r_o ? acc.p_o : acc.i_o) += w_elem * g_o;

            const CrossingInfo ci = crossing_info(layout, tx, ue);
            if (ci.count == 0) {
                const double g = path_gain_lin(models.los, s, r);
                (r <= r_l ? acc.p_b_los : acc.i_b_los) += w_elem * g;
            } else if (multiwall) {
                const double g = path_gain_lin(los_law, s, r) * db_to_lin(-ci.attenuation_db);
                const double r_n = detail::coverage_with_attenuation(s, ci.attenuation_db);
                (r <= r_n ? acc.p_b_nlos : acc.i_b_nlos) += w_elem * g;
            } else {
                const double g = path_gain_lin(models.nlos, s, r);
                (r <= r_n_fixed ? acc.p_b_nlos : acc.i_b_nlos) += w_elem * g;
            }
        }
        acc.p_b = acc.p_b_los + acc.p_b_nlos;
        acc.i_b = acc.i_b_los + acc.i_b_nlos;
        reps[rep] = acc;
    });

    McEstimate out;
    const int n = cfg.repetitions;
    auto fields = {&PowerBreakdown::p_o,      &PowerBreakdown::i_o,      &PowerBreakdown::p_b,
                   &PowerBreakdown::i_b,      &PowerBreakdown::p_b_los,  &PowerBreakdown::p_b_nlos,
                   &PowerBreakdown::i_b_los,  &PowerBreakdown::i_b_nlos};
    for (auto f : fields) {
        double mean = 0.0;
        for (const auto& r : reps) mean += r.*f;
        mean /= n;
        double var = 0.0;
        for (const auto& r : reps) var += (r.*f - mean) * (r.*f - mean);
        out.mean.*f = mean;
        out.std_error.*f = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    }
    out.per_repetition = std::move(reps);
    return out;
}

}  // namespace bwp
