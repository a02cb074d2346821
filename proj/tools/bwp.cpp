// bwp: evaluates how building layouts reshape indoor downlink power and
// interference relative to an open-space benchmark, over a continuum
// transmitter field.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bwp/bwp.hpp"

namespace {

struct CommonOpts {
    bwp::Scenario scenario;
    bwp::QuadratureConfig quad;
    std::string scenario_file;
    std::string out_prefix = "bwp_out";
    unsigned threads = 0;
    std::string nlos_model = "single";
    bool scenario_file_given = false;
};

void add_scenario_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--scenario", o.scenario_file, "scenario file (key = value); flags override");
    cmd->add_option("--freq-ghz", o.scenario.frequency_ghz, "carrier frequency in GHz");
    cmd->add_option("--p-t", o.scenario.p_t_dbw_m2, "transmit power density in dBW/m^2");
    cmd->add_option("--p-th", o.scenario.p_th_dbw_m2, "detectability threshold in dBW/m^2");
    cmd->add_option("--noise-dbw", o.scenario.noise_dbw, "thermal noise power in dBW (-inf for none)");
    cmd->add_option("--n-los", o.scenario.n_los, "LOS path-loss exponent");
    cmd->add_option("--n-nlos", o.scenario.n_nlos, "NLOS path-loss exponent");
    cmd->add_option("--height", o.scenario.height_m, "antenna height in meters");
    cmd->add_option("--r-min", o.scenario.r_min_m, "near-field clamp radius in meters");
    cmd->add_option("--r-max", o.scenario.r_max_m, "interference integration cutoff in meters");
    cmd->add_option("--gamma-ground", o.scenario.gamma_ground, "ground reflection coefficient in [-1, 0]");
    cmd->add_option("--n-theta", o.quad.n_theta, "angular quadrature resolution");
    cmd->add_option("--n-radial", o.quad.n_radial, "radial quadrature resolution");
    cmd->add_option("--refine", o.quad.refine, "resolution multiplier");
    cmd->add_option("--threads", o.threads, "worker threads (default: BWP_THREADS or all cores)");
    cmd->add_option("--out", o.out_prefix, "output file prefix");
    cmd->add_option("--nlos-model", o.nlos_model, "NLOS gain path: single | multiwall")
        ->check(CLI::IsMember({"single", "multiwall"}));
}

// Flags must override file values, so the file is applied first and flag
// parsing is re-run by CLI11 afterwards; we detect the file before parse.
void apply_scenario_file(CLI::App* cmd, CommonOpts& o) {
    if (!o.scenario_file.empty()) {
        bwp::Scenario from_file = bwp::read_scenario_file(o.scenario_file);
        // re-apply explicit flags on top
        bwp::Scenario flags = o.scenario;
        bwp::Scenario defaults;
        auto pick = [](double file_v, double flag_v, double default_v) {
            return flag_v != default_v ? flag_v : file_v;
        };
        from_file.frequency_ghz = pick(from_file.frequency_ghz, flags.frequency_ghz, defaults.frequency_ghz);
        from_file.p_t_dbw_m2 = pick(from_file.p_t_dbw_m2, flags.p_t_dbw_m2, defaults.p_t_dbw_m2);
        from_file.p_th_dbw_m2 = pick(from_file.p_th_dbw_m2, flags.p_th_dbw_m2, defaults.p_th_dbw_m2);
        if (!std::isinf(flags.noise_dbw)) from_file.noise_dbw = flags.noise_dbw;
        from_file.n_los = pick(from_file.n_los, flags.n_los, defaults.n_los);
        from_file.n_nlos = pick(from_file.n_nlos, flags.n_nlos, defaults.n_nlos);
        from_file.height_m = pick(from_file.height_m, flags.height_m, defaults.height_m);
        from_file.r_min_m = pick(from_file.r_min_m, flags.r_min_m, defaults.r_min_m);
        from_file.r_max_m = pick(from_file.r_max_m, flags.r_max_m, defaults.r_max_m);
        from_file.gamma_ground = pick(from_file.gamma_ground, flags.gamma_ground, defaults.gamma_ground);
        o.scenario = from_file;
    }
    (void)cmd;
    o.scenario.validate();
}

unsigned resolve_threads(const CommonOpts& o) {
    if (o.threads > 0) return o.threads;
    if (const char* env = std::getenv("BWP_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return bwp::default_thread_count();
}

bwp::EvalModels resolve_models(const CommonOpts& o) {
    bwp::EvalModels m;
    if (o.nlos_model == "multiwall") m.nlos = bwp::PathGainModel::multi_wall(1, 10.0);
    return m;
}

void write_manifest(const CommonOpts& o, const std::string& command, std::uint64_t layout_hash,
                    std::vector<std::pair<std::string, std::string>> extra) {
    bwp::RunManifest m;
    m.command = command;
    m.scenario = o.scenario;
    m.layout_hash = layout_hash;
    m.quad = o.quad;
    m.extra = std::move(extra);
    m.extra.emplace_back("nlos_model", o.nlos_model);
    m.write_file(o.out_prefix + ".manifest.txt");
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream f(path);
    if (!f) throw bwp::input_error("cannot open output file: " + path);
    body(f);
}

struct LayoutOpts {
    std::string layout_file;
    std::string builtin;
    bwp::OfficeParams office;
};

void add_layout_flags(CLI::App* cmd, LayoutOpts& l) {
    cmd->add_option("--layout", l.layout_file, "layout file (bwp-layout v1)");
    cmd->add_option("--builtin", l.builtin, "builtin layout generator: office")
        ->check(CLI::IsMember({"office"}));
    cmd->add_option("--rooms-per-row", l.office.rooms_per_row, "office generator: rooms per row");
    cmd->add_option("--room-w", l.office.room_w, "office generator: room width (m)");
    cmd->add_option("--room-l", l.office.room_l, "office generator: room length (m)");
    cmd->add_option("--corridor-w", l.office.corridor_w, "office generator: corridor width (m)");
    cmd->add_option("--corridors", l.office.n_corridors, "office generator: corridor blocks");
    cmd->add_option("--wall-att", l.office.wall_attenuation_db, "wall attenuation (dB per crossing)");
}

bwp::BuildingLayout resolve_layout(const LayoutOpts& l) {
    if (!l.layout_file.empty() && !l.builtin.empty())
        throw std::invalid_argument("--layout and --builtin are mutually exclusive");
    if (!l.layout_file.empty()) return bwp::read_layout_file(l.layout_file);
    if (l.builtin == "office") return bwp::make_office_layout(l.office);
    throw std::invalid_argument("one of --layout or --builtin is required");
}

int run_eval_room(CommonOpts& o, double width, double length, double cell, double wall_att) {
    if (!(width > 0.0)) throw std::invalid_argument("--width must be positive");
    if (!(length > 0.0)) throw std::invalid_argument("--length must be positive");
    const bwp::RoomSpec spec(std::min(width, length), std::max(width, length));
    const auto models = resolve_models(o);
    const unsigned threads = resolve_threads(o);
    const bwp::GridMap grid = bwp::room_grid_eval(spec, o.scenario, cell, o.quad, models, threads, wall_att);
    const bwp::MeanMetrics mean = bwp::mean_metrics(grid);

    write_file(o.out_prefix + "_grid.csv", [&](std::ostream& os) { bwp::write_grid_csv(grid, os); });
    write_manifest(o, "eval-room", bwp::layout_hash(bwp::make_rect_room(spec, wall_att)),
                   {{"width_m", bwp::fmt_double(spec.width)},
                    {"length_m", bwp::fmt_double(spec.length)},
                    {"cell_m", bwp::fmt_double(cell)},
                    {"wall_att_db", bwp::fmt_double(wall_att)}});
    std::cout << "room " << spec.width << " x " << spec.length << " m, " << grid.nx << "x" << grid.ny
              << " cells\n";
    std::cout << "mean_g_i = " << bwp::fmt_double(mean.g_i) << "\nmean_g_p = " << bwp::fmt_double(mean.g_p)
              << "\n";
    std::cout << "wrote " << o.out_prefix << "_grid.csv\n";
    return 0;
}

int run_eval_building(CommonOpts& o, const LayoutOpts& l, double cell) {
    const bwp::BuildingLayout layout = resolve_layout(l);
    const auto models = resolve_models(o);
    const unsigned threads = resolve_threads(o);
    const auto& b = layout.bounds();
    const bwp::GridMap grid = bwp::grid_eval(layout, o.scenario, b.lo.x, b.lo.y, b.width(), b.height(), cell,
                                             o.quad, models, threads);
    const bwp::MeanMetrics mean = bwp::mean_metrics(grid);

    write_file(o.out_prefix + "_grid.csv", [&](std::ostream& os) { bwp::write_grid_csv(grid, os); });
    std::vector<double> gi, gp;
    for (const auto& c : grid.cells) {
        gi.push_back(c.g_i);
        gp.push_back(c.g_p);
    }
    write_file(o.out_prefix + "_cdf_g_i.csv",
               [&](std::ostream& os) { bwp::write_cdf_csv(bwp::cdf(gi), os); });
    write_file(o.out_prefix + "_cdf_g_p.csv",
               [&](std::ostream& os) { bwp::write_cdf_csv(bwp::cdf(gp), os); });
    if (l.builtin == "office") {
        const auto units = bwp::per_unit_metrics(grid, bwp::office_units(l.office));
        write_file(o.out_prefix + "_units.csv",
                   [&](std::ostream& os) { bwp::write_unit_metrics_csv(units, os); });
    }
    write_manifest(o, "eval-building", bwp::layout_hash(layout),
                   {{"cell_m", bwp::fmt_double(cell)},
                    {"layout", l.layout_file.empty() ? "builtin:" + l.builtin : l.layout_file}});
    std::cout << "building " << b.width() << " x " << b.height() << " m, " << grid.nx << "x" << grid.ny
              << " cells\n";
    std::cout << "mean_g_i = " << bwp::fmt_double(mean.g_i) << "\nmean_g_p = " << bwp::fmt_double(mean.g_p)
              << "\n";
    std::cout << "wrote " << o.out_prefix << "_grid.csv (+cdf, units)\n";
    return 0;
}

int run_sweep_dimensions(CommonOpts& o, const std::vector<double>& areas, const std::vector<double>& ars,
                         double cell) {
    bwp::SweepSpec spec;
    spec.areas_m2 = areas;
    spec.aspect_ratios = ars;
    const auto rows = bwp::sweep_dimensions(spec, o.scenario, cell, o.quad, resolve_models(o), resolve_threads(o));
    write_file(o.out_prefix + "_dimensions.csv",
               [&](std::ostream& os) { bwp::write_dimension_sweep_csv(rows, os); });
    write_manifest(o, "sweep-dimensions", 0, {{"cell_m", bwp::fmt_double(cell)}});
    std::cout << "wrote " << o.out_prefix << "_dimensions.csv (" << rows.size() << " rows)\n";
    return 0;
}

int run_sweep_frequency(CommonOpts& o, double f_from, double f_to, int points, double area, double ar,
                        double cell) {
    if (points < 3) throw std::invalid_argument("--points must be >= 3");
    bwp::SweepSpec spec;
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        spec.frequencies_ghz.push_back(f_from * std::pow(f_to / f_from, t));
    }
    const bwp::RoomSpec room = bwp::RoomSpec::from_area_ar(area, ar);
    const auto sweep =
        bwp::sweep_frequency(spec, o.scenario, room, cell, o.quad, resolve_models(o), resolve_threads(o));
    write_file(o.out_prefix + "_frequency.csv",
               [&](std::ostream& os) { bwp::write_frequency_sweep_csv(sweep.rows, os); });
    write_manifest(o, "sweep-frequency", 0,
                   {{"area_m2", bwp::fmt_double(area)},
                    {"aspect_ratio", bwp::fmt_double(ar)},
                    {"cell_m", bwp::fmt_double(cell)}});
    std::cout << "wrote " << o.out_prefix << "_frequency.csv (" << sweep.rows.size() << " rows)\n";
    std::cout << "g_p_non_decreasing = " << (sweep.g_p_non_decreasing ? "yes" : "no") << "\n";
    std::cout << "g_i_unimodal = " << (sweep.g_i_unimodal ? "yes" : "no") << "\n";
    std::cout << "argmax mean_g_i: f* = " << sweep.f_star_ghz << " GHz (bracket [" << sweep.f_lo_ghz << ", "
              << sweep.f_hi_ghz << "])\n";
    return 0;
}

int run_validate_mc(CommonOpts& o, const LayoutOpts& l, bool open_space, double ue_x, double ue_y,
                    std::uint64_t n, std::uint64_t seed, int reps) {
    bwp::BuildingLayout layout;
    std::uint64_t lhash = 0;
    if (!open_space) {
        layout = resolve_layout(l);
        lhash = bwp::layout_hash(layout);
    }
    const bwp::Point2D ue{ue_x, ue_y};
    const auto models = resolve_models(o);
    const unsigned threads = resolve_threads(o);

    const bwp::OpenSpacePowers open = bwp::open_space_powers(o.scenario, o.quad);
    const bwp::PowerBreakdown quad_b = bwp::building_powers(layout, o.scenario, ue, o.quad, models);
    bwp::McConfig cfg;
    cfg.n_elements = n;
    cfg.seed = seed;
    cfg.repetitions = reps;
    const bwp::McEstimate mc = bwp::mc_powers(layout, o.scenario, ue, cfg, o.quad, models, threads);

    write_file(o.out_prefix + "_mc.csv", [&](std::ostream& os) {
        os << "quantity,quadrature,mc_mean,mc_std_error,abs_z\n";
        auto row = [&](const char* name, double q, double mean, double se) {
            const double z = se > 0 ? std::abs(q - mean) / se : 0.0;
            bwp::write_csv_row(os, {name, bwp::fmt_double(q), bwp::fmt_double(mean), bwp::fmt_double(se),
                                    bwp::fmt_double(z)});
        };
        row("p_o", open.p_o, mc.mean.p_o, mc.std_error.p_o);
        row("i_o", open.i_o, mc.mean.i_o, mc.std_error.i_o);
        row("p_b", quad_b.p_b, mc.mean.p_b, mc.std_error.p_b);
        row("i_b", quad_b.i_b, mc.mean.i_b, mc.std_error.i_b);
    });
    write_manifest(o, "validate-mc", lhash,
                   {{"n_elements", std::to_string(n)},
                    {"seed", std::to_string(seed)},
                    {"repetitions", std::to_string(reps)},
                    {"ue_x", bwp::fmt_double(ue_x)},
                    {"ue_y", bwp::fmt_double(ue_y)},
                    {"open_space", open_space ? "1" : "0"}});
    std::cout << "wrote " << o.out_prefix << "_mc.csv\n";
    return 0;
}

int run_train_surrogate(CommonOpts& o, int band, std::vector<double> areas, std::vector<double> ars,
                        double cell, bwp::TrainConfig train_cfg, const std::string& model_out) {
    if (band != 0) {
        if (band != 6 && band != 28) throw std::invalid_argument("--band must be 6 or 28");
        o.scenario.frequency_ghz = band;
    }
    bwp::SweepSpec spec;
    spec.areas_m2 = std::move(areas);
    spec.aspect_ratios = std::move(ars);
    const bwp::Dataset data =
        bwp::generate_dataset(spec, o.scenario, cell, o.quad, resolve_models(o), resolve_threads(o));
    const bwp::TrainResult result = bwp::train({4, 30, 30, 2}, data, train_cfg);

    bwp::save_mlp(result.model, model_out);
    write_file(o.out_prefix + "_loss.csv", [&](std::ostream& os) {
        os << "epoch,train_mse\n";
        for (std::size_t e = 0; e < result.loss_curve.size(); ++e)
            bwp::write_csv_row(os, {std::to_string(e), bwp::fmt_double(result.loss_curve[e])});
    });
    write_manifest(o, "train-surrogate", 0,
                   {{"dataset_rows", std::to_string(data.inputs.size())},
                    {"cell_m", bwp::fmt_double(cell)},
                    {"epochs", std::to_string(train_cfg.epochs)},
                    {"batch", std::to_string(train_cfg.batch_size)},
                    {"lr", bwp::fmt_double(train_cfg.learning_rate)},
                    {"seed", std::to_string(train_cfg.seed)},
                    {"val_split", bwp::fmt_double(train_cfg.val_split)},
                    {"model_file", model_out}});
    std::cout << "dataset rows = " << data.inputs.size() << "\n";
    std::cout << "val_rmse_g_i = " << result.val_rmse_g_i << "\nval_rmse_g_p = " << result.val_rmse_g_p
              << "\n";
    std::cout << "wrote " << model_out << "\n";
    return 0;
}

int run_predict(const std::string& model_file, double x, double y, double width, double length) {
    const bwp::MlpModel m = bwp::load_mlp(model_file);
    const auto out = bwp::forward(m, {x, y, width, length});
    std::cout << "g_i = " << bwp::fmt_double(out[0]) << "\ng_p = " << bwp::fmt_double(out[1]) << "\n";
    return 0;
}

int run_calibrate_noise(CommonOpts& o, std::vector<double> areas, std::vector<double> ars, double lo,
                        double hi, double cell) {
    bwp::SweepSpec spec;
    spec.areas_m2 = std::move(areas);
    spec.aspect_ratios = std::move(ars);
    const auto r =
        bwp::calibrate_noise(spec, o.scenario, lo, hi, cell, o.quad, resolve_models(o), resolve_threads(o));
    write_manifest(o, "calibrate-noise", 0,
                   {{"target_lo", bwp::fmt_double(lo)},
                    {"target_hi", bwp::fmt_double(hi)},
                    {"cell_m", bwp::fmt_double(cell)}});
    if (r.degenerate) std::cout << "calibration degenerate: g_i is independent of sigma^2 (i_b = i_o)\n";
    if (r.found) {
        std::cout << "sigma2_w = " << bwp::fmt_double(r.sigma2_w) << " ("
                  << (r.sigma2_w > 0 ? bwp::lin_to_db(r.sigma2_w) : -std::numeric_limits<double>::infinity())
                  << " dBW)\n";
    } else {
        std::cout << "none found\n";
    }
    std::cout << "residual = " << bwp::fmt_double(r.residual) << "\n";
    std::cout << "per-room mean g_i range at optimum: [" << r.g_i_min << ", " << r.g_i_max << "]\n";
    return 0;  // "none found" is an honest outcome, not a failure
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"building wireless performance (interference gain / power gain) evaluator"};
    app.require_subcommand(1);

    CommonOpts o;
    LayoutOpts layout;

    // eval-room
    double width = 5.0, length = 4.0, cell = 0.5, wall_att = 10.0;
    auto* eval_room = app.add_subcommand("eval-room", "raster g_i/g_p over one rectangular room");
    add_scenario_flags(eval_room, o);
    eval_room->add_option("--width", width, "room width (m)")->required();
    eval_room->add_option("--length", length, "room length (m)")->required();
    eval_room->add_option("--cell", cell, "UE grid cell size (m)");
    eval_room->add_option("--wall-att", wall_att, "wall attenuation (dB per crossing)");

    // eval-building
    double bcell = 0.5;
    auto* eval_building = app.add_subcommand("eval-building", "per-room table and CDFs for a building");
    add_scenario_flags(eval_building, o);
    add_layout_flags(eval_building, layout);
    eval_building->add_option("--cell", bcell, "UE grid cell size (m)");

    // sweep-dimensions
    std::vector<double> areas{20, 40, 60, 80, 100};
    std::vector<double> ars{1, 2, 3, 4, 5, 6, 7, 8};
    double scell = 0.5;
    auto* sweep_dims = app.add_subcommand("sweep-dimensions", "mean metrics over room sizes and aspect ratios");
    add_scenario_flags(sweep_dims, o);
    sweep_dims->add_option("--areas", areas, "room areas (m^2)")->delimiter(',');
    sweep_dims->add_option("--ars", ars, "aspect ratios")->delimiter(',');
    sweep_dims->add_option("--cell", scell, "UE grid cell size (m)");

    // sweep-frequency
    double f_from = 0.5, f_to = 100.0, farea = 60.0, far = 2.0, fcell = 0.5;
    int points = 24;
    auto* sweep_freq = app.add_subcommand("sweep-frequency", "mean metrics vs carrier frequency on one room");
    add_scenario_flags(sweep_freq, o);
    sweep_freq->add_option("--from", f_from, "lowest frequency (GHz)");
    sweep_freq->add_option("--to", f_to, "highest frequency (GHz)");
    sweep_freq->add_option("--points", points, "log-spaced sample count");
    sweep_freq->add_option("--area", farea, "room area (m^2)");
    sweep_freq->add_option("--ar", far, "room aspect ratio");
    sweep_freq->add_option("--cell", fcell, "UE grid cell size (m)");

    // validate-mc
    double ue_x = 0.0, ue_y = 0.0;
    std::uint64_t mc_n = 1000000, mc_seed = 1;
    int mc_reps = 20;
    bool open_space = false;
    auto* validate = app.add_subcommand("validate-mc", "Monte Carlo cross-check of the quadrature");
    add_scenario_flags(validate, o);
    add_layout_flags(validate, layout);
    validate->add_option("--ue-x", ue_x, "UE x (m)")->required();
    validate->add_option("--ue-y", ue_y, "UE y (m)")->required();
    validate->add_option("--n", mc_n, "elements per repetition");
    validate->add_option("--seed", mc_seed, "PRNG seed");
    validate->add_option("--reps", mc_reps, "repetitions");
    validate->add_flag("--open-space", open_space, "no walls (benchmark scenario only)");

    // train-surrogate
    int band = 0;
    bwp::TrainConfig tc;
    std::string model_out = "bwp_mlp.txt";
    double tcell = 0.5;
    std::vector<double> tareas{20, 40, 60, 80, 100};
    std::vector<double> tars{1, 2, 3, 4, 5, 6, 7, 8};
    auto* train_cmd = app.add_subcommand("train-surrogate", "train the (x, y, W, L) -> (g_i, g_p) network");
    add_scenario_flags(train_cmd, o);
    train_cmd->add_option("--band", band, "shorthand for --freq-ghz: 6 or 28");
    train_cmd->add_option("--areas", tareas, "training room areas (m^2)")->delimiter(',');
    train_cmd->add_option("--ars", tars, "training aspect ratios")->delimiter(',');
    train_cmd->add_option("--cell", tcell, "label grid cell size (m)");
    train_cmd->add_option("--epochs", tc.epochs, "training epochs");
    train_cmd->add_option("--lr", tc.learning_rate, "learning rate");
    train_cmd->add_option("--batch", tc.batch_size, "mini-batch size");
    train_cmd->add_option("--seed", tc.seed, "training seed");
    train_cmd->add_option("--split", tc.val_split, "validation fraction");
    train_cmd->add_option("--model-out", model_out, "model file path");

    // predict
    std::string model_file;
    double px = 0, py = 0, pw = 0, pl = 0;
    auto* predict = app.add_subcommand("predict", "evaluate a trained surrogate at one UE location");
    predict->add_option("--model", model_file, "model file")->required();
    predict->add_option("--x", px, "UE x (m)")->required();
    predict->add_option("--y", py, "UE y (m)")->required();
    predict->add_option("--width", pw, "room width (m)")->required();
    predict->add_option("--length", pl, "room length (m)")->required();

    // calibrate-noise
    double cal_lo = 41.0, cal_hi = 46.0, ccell = 0.5;
    std::vector<double> careas{20, 40, 60, 80, 100};
    std::vector<double> cars{1, 2, 3, 4, 5, 6, 7, 8};
    auto* calibrate = app.add_subcommand("calibrate-noise", "search sigma^2 placing per-room mean g_i in a target interval");
    add_scenario_flags(calibrate, o);
    calibrate->add_option("--areas", careas, "room areas (m^2)")->delimiter(',');
    calibrate->add_option("--ars", cars, "aspect ratios")->delimiter(',');
    calibrate->add_option("--target-lo", cal_lo, "target interval lower edge");
    calibrate->add_option("--target-hi", cal_hi, "target interval upper edge");
    calibrate->add_option("--cell", ccell, "UE grid cell size (m)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // bad arguments
    }

    try {
        if (app.got_subcommand(eval_room)) {
            apply_scenario_file(eval_room, o);
            return run_eval_room(o, width, length, cell, wall_att);
        }
        if (app.got_subcommand(eval_building)) {
            apply_scenario_file(eval_building, o);
            return run_eval_building(o, layout, bcell);
        }
        if (app.got_subcommand(sweep_dims)) {
            apply_scenario_file(sweep_dims, o);
            return run_sweep_dimensions(o, areas, ars, scell);
        }
        if (app.got_subcommand(sweep_freq)) {
            apply_scenario_file(sweep_freq, o);
            return run_sweep_frequency(o, f_from, f_to, points, farea, far, fcell);
        }
        if (app.got_subcommand(validate)) {
            apply_scenario_file(validate, o);
            return run_validate_mc(o, layout, open_space, ue_x, ue_y, mc_n, mc_seed, mc_reps);
        }
        if (app.got_subcommand(train_cmd)) {
            apply_scenario_file(train_cmd, o);
            return run_train_surrogate(o, band, tareas, tars, tcell, tc, model_out);
        }
        if (app.got_subcommand(predict)) return run_predict(model_file, px, py, pw, pl);
        if (app.got_subcommand(calibrate)) {
            apply_scenario_file(calibrate, o);
            return run_calibrate_noise(o, careas, cars, cal_lo, cal_hi, ccell);
        }
    } catch (const bwp::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const bwp::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
