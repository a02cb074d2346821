#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bwp/analysis.hpp"
#include "bwp/common.hpp"
#include "bwp/geometry.hpp"
#include "bwp/propagation.hpp"

namespace bwp {

/// Shortest decimal that round-trips the double exactly.
inline std::string fmt_double(double v) {
    char buf[40];
    if (v == std::floor(v) && std::abs(v) < 9.0e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back;
    std::sscanf(buf, "%lf", &back);
    if (back == v) {
        for (int prec = 1; prec < 17; ++prec) {
            char probe[40];
            std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
            std::sscanf(probe, "%lf", &back);
            if (back == v) return probe;
        }
    }
    return buf;
}

// ---------------------------------------------------------------------------
// Layout file: header "bwp-layout v1", then "wall x1 y1 x2 y2 att_db" lines.
// '#' starts a comment; blank lines allowed. All values SI.
// ---------------------------------------------------------------------------

inline void write_layout(const BuildingLayout& layout, std::ostream& os) {
    os << "bwp-layout v1\n";
    for (const auto& w : layout.walls()) {
        os << "wall " << fmt_double(w.a.x) << ' ' << fmt_double(w.a.y) << ' ' << fmt_double(w.b.x) << ' '
           << fmt_double(w.b.y) << ' ' << fmt_double(w.attenuation_db) << '\n';
    }
}

inline void write_layout(const BuildingLayout& layout, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw input_error("cannot open layout file for writing: " + path);
    write_layout(layout, f);
}

inline BuildingLayout read_layout(std::istream& is, const std::string& name = "<layout>") {
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& what) {
        throw input_error(name + " line " + std::to_string(line_no) + ": " + what);
    };
    if (!std::getline(is, line)) {
        line_no = 1;
        fail("empty file, expected header 'bwp-layout v1'");
    }
    ++line_no;
    if (line != "bwp-layout v1") fail("expected header 'bwp-layout v1'");
    std::vector<Wall> walls;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;  // blank or comment-only
        if (key != "wall") fail("unknown directive '" + key + "'");
        Wall w;
        if (!(ls >> w.a.x >> w.a.y >> w.b.x >> w.b.y >> w.attenuation_db))
            fail("expected 'wall x1 y1 x2 y2 att_db'");
        std::string extra;
        if (ls >> extra) fail("trailing token '" + extra + "'");
        walls.push_back(w);
    }
    try {
        return BuildingLayout(std::move(walls));
    } catch (const std::invalid_argument& e) {
        throw input_error(name + ": " + e.what());
    }
}

inline BuildingLayout read_layout_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw input_error("cannot open layout file: " + path);
    return read_layout(f, path);
}

inline std::uint64_t layout_hash(const BuildingLayout& layout) {
    std::ostringstream os;
    write_layout(layout, os);
    return fnv1a64(os.str());
}

// ---------------------------------------------------------------------------
// Scenario file: "key = value" lines, '#' comments. Unlisted keys keep their
// defaults.
// ---------------------------------------------------------------------------

inline void write_scenario(const Scenario& s, std::ostream& os) {
    os << "frequency_ghz = " << fmt_double(s.frequency_ghz) << '\n'
       << "p_t_dbw_m2 = " << fmt_double(s.p_t_dbw_m2) << '\n'
       << "p_th_dbw_m2 = " << fmt_double(s.p_th_dbw_m2) << '\n'
       << "noise_dbw = " << (std::isinf(s.noise_dbw) && s.noise_dbw < 0 ? std::string("-inf") : fmt_double(s.noise_dbw))
       << '\n'
       << "n_los = " << fmt_double(s.n_los) << '\n'
       << "n_nlos = " << fmt_double(s.n_nlos) << '\n'
       << "height_m = " << fmt_double(s.height_m) << '\n'
       << "r_min_m = " << fmt_double(s.r_min_m) << '\n'
       << "r_max_m = " << fmt_double(s.r_max_m) << '\n'
       << "gamma_ground = " << fmt_double(s.gamma_ground) << '\n';
}

inline Scenario read_scenario(std::istream& is, const std::string& name = "<scenario>") {
    Scenario s;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key, eq, value;
        if (!(ls >> key)) continue;
        if (!(ls >> eq >> value) || eq != "=")
            throw input_error(name + " line " + std::to_string(line_no) + ": expected 'key = value'");
        double v;
        if (value == "-inf") {
            v = -std::numeric_limits<double>::infinity();
        } else {
            std::istringstream vs(value);
            if (!(vs >> v))
                throw input_error(name + " line " + std::to_string(line_no) + ": bad number '" + value + "'");
        }
        if (key == "frequency_ghz") s.frequency_ghz = v;
        else if (key == "p_t_dbw_m2") s.p_t_dbw_m2 = v;
        else if (key == "p_th_dbw_m2") s.p_th_dbw_m2 = v;
        else if (key == "noise_dbw") s.noise_dbw = v;
        else if (key == "n_los") s.n_los = v;
        else if (key == "n_nlos") s.n_nlos = v;
        else if (key == "height_m") s.height_m = v;
        else if (key == "r_min_m") s.r_min_m = v;
        else if (key == "r_max_m") s.r_max_m = v;
        else if (key == "gamma_ground") s.gamma_ground = v;
        else throw input_error(name + " line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw input_error(name + ": " + e.what());
    }
    return s;
}

inline Scenario read_scenario_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw input_error("cannot open scenario file: " + path);
    return read_scenario(f, path);
}

// ---------------------------------------------------------------------------
// CSV emission. Header row mandatory, deterministic row order, values at
// round-trip precision.
// ---------------------------------------------------------------------------

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
}

inline void write_grid_csv(const GridMap& g, std::ostream& os) {
    os << "x,y,g_i,g_p,p_b,i_b,p_o,i_o\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const auto& c = g.at(i, j);
            const Point2D p = g.center(i, j);
            write_csv_row(os, {fmt_double(p.x), fmt_double(p.y), fmt_double(c.g_i), fmt_double(c.g_p),
                               fmt_double(c.breakdown.p_b), fmt_double(c.breakdown.i_b),
                               fmt_double(c.breakdown.p_o), fmt_double(c.breakdown.i_o)});
        }
    }
}

inline void write_cdf_csv(const std::vector<std::pair<double, double>>& cdf_points, std::ostream& os) {
    os << "value,cum_prob\n";
    for (const auto& [v, p] : cdf_points) write_csv_row(os, {fmt_double(v), fmt_double(p)});
}

inline void write_dimension_sweep_csv(const std::vector<DimensionRow>& rows, std::ostream& os) {
    os << "area_m2,aspect_ratio,mean_g_i,mean_g_p\n";
    for (const auto& r : rows)
        write_csv_row(os, {fmt_double(r.area_m2), fmt_double(r.aspect_ratio), fmt_double(r.mean.g_i),
                           fmt_double(r.mean.g_p)});
}

inline void write_frequency_sweep_csv(const std::vector<FrequencyRow>& rows, std::ostream& os) {
    os << "frequency_ghz,mean_g_i,mean_g_p\n";
    for (const auto& r : rows)
        write_csv_row(os, {fmt_double(r.frequency_ghz), fmt_double(r.mean.g_i), fmt_double(r.mean.g_p)});
}

inline void write_unit_metrics_csv(const std::vector<UnitMetrics>& rows, std::ostream& os) {
    os << "unit,kind,x0,y0,x1,y1,cells,mean_g_i,mean_g_p\n";
    for (const auto& r : rows)
        write_csv_row(os, {r.unit.label, r.unit.corridor ? "corridor" : "room", fmt_double(r.unit.rect.lo.x),
                           fmt_double(r.unit.rect.lo.y), fmt_double(r.unit.rect.hi.x),
                           fmt_double(r.unit.rect.hi.y), std::to_string(r.cells), fmt_double(r.mean.g_i),
                           fmt_double(r.mean.g_p)});
}

/// Parses a numeric CSV with its header. Used by the round-trip tests and
/// the predict command.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_numeric_csv(std::istream& is, const std::string& name = "<csv>") {
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw input_error(name + ": empty csv");
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            std::istringstream vs(cell);
            double v;
            if (!(vs >> v))
                throw input_error(name + " line " + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
            row.push_back(v);
        }
        if (row.size() != t.header.size())
            throw input_error(name + " line " + std::to_string(line_no) + ": column count mismatch");
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Run manifest: enough to reproduce any output bit-for-bit.
// ---------------------------------------------------------------------------

struct RunManifest {
    std::string command;
    Scenario scenario;
    std::uint64_t layout_hash = 0;
    QuadratureConfig quad;
    std::vector<std::pair<std::string, std::string>> extra;  // seeds, grid cell, flags

    void write(std::ostream& os) const {
        os << "tool = " << tool_version << '\n';
        os << "command = " << command << '\n';
        os << "layout_hash = " << layout_hash << '\n';
        os << "quad.n_radial = " << quad.n_radial << '\n';
        os << "quad.n_theta = " << quad.n_theta << '\n';
        os << "quad.refine = " << quad.refine << '\n';
        os << "quad.r_max_override = " << fmt_double(quad.r_max_override) << '\n';
        os << "rng = mt19937_64, substream seed = splitmix64(seed xor splitmix64(rep+1))\n";
        for (const auto& [k, v] : extra) os << k << " = " << v << '\n';
        os << "[scenario]\n";
        write_scenario(scenario, os);
    }

    void write_file(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw input_error("cannot open manifest for writing: " + path);
        write(f);
    }
};

}  // namespace bwp
