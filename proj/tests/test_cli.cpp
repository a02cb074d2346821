#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bwp/io.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const std::string cmd = "cd '" + dir.string() + "' && '" + BWP_CLI_PATH + "' " + args + " > '" +
                            out.string() + "' 2> '" + (dir / "stderr.txt").string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    r.stdout_text = ss.str();
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("bwp_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("eval-room emits the raster csv and summary") {
    const auto dir = fresh_dir("eval_room");
    const auto r = run_cli(
        "eval-room --width 5 --length 4 --freq-ghz 28 --cell 1 --n-theta 120 --n-radial 48 --threads 2",
        dir);
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.find("mean_g_i") != std::string::npos);
    const std::string csv = slurp(dir / "bwp_out_grid.csv");
    CHECK(csv.rfind("x,y,g_i,g_p,p_b,i_b,p_o,i_o\n", 0) == 0);
    CHECK(fs::exists(dir / "bwp_out.manifest.txt"));

    // summary means equal the emitted raster means
    std::istringstream is(csv);
    const bwp::CsvTable t = bwp::read_numeric_csv(is);
    double sum_gi = 0.0;
    for (const auto& row : t.rows) sum_gi += row[2];
    const double mean_gi = sum_gi / t.rows.size();
    std::istringstream out(r.stdout_text);
    std::string line;
    double reported = -1.0;
    while (std::getline(out, line)) {
        if (line.rfind("mean_g_i = ", 0) == 0) reported = std::stod(line.substr(11));
    }
    CHECK(std::abs(reported - mean_gi) < 1e-9 * std::abs(mean_gi));
}

TEST_CASE("bad flags exit with code 2 and name the offender") {
    const auto dir = fresh_dir("bad_flags");
    CHECK(run_cli("eval-room --width 0 --length 4", dir).exit_code == 2);
    CHECK(run_cli("eval-room --length 4", dir).exit_code != 0);  // missing required --width
    CHECK(run_cli("eval-room --width 5 --length 4 --nlos-model bogus", dir).exit_code == 2);
    const std::string err = slurp(dir / "stderr.txt");
    CHECK(err.find("--nlos-model") != std::string::npos);
}

TEST_CASE("layout file errors cite the line and exit 3") {
    const auto dir = fresh_dir("layout_err");
    {
        std::ofstream f(dir / "bad.layout");
        f << "bwp-layout v1\nwall 0 0 1 0 10\nwall nonsense\n";
    }
    const auto r = run_cli("eval-building --layout bad.layout --freq-ghz 28 --cell 2", dir);
    CHECK(r.exit_code == 3);
    CHECK(slurp(dir / "stderr.txt").find("line 3") != std::string::npos);

    const auto missing = run_cli("eval-building --layout nope.layout --freq-ghz 28", dir);
    CHECK(missing.exit_code == 3);
}

TEST_CASE("validate-mc is deterministic for a fixed seed") {
    const auto dir_a = fresh_dir("mc_a");
    const auto dir_b = fresh_dir("mc_b");
    const std::string args =
        "validate-mc --open-space --ue-x 0 --ue-y 0 --freq-ghz 28 --n 20000 --reps 3 --seed 7 --threads 2";
    REQUIRE(run_cli(args, dir_a).exit_code == 0);
    REQUIRE(run_cli(args, dir_b).exit_code == 0);
    CHECK(slurp(dir_a / "bwp_out_mc.csv") == slurp(dir_b / "bwp_out_mc.csv"));
    CHECK(!slurp(dir_a / "bwp_out_mc.csv").empty());
}

TEST_CASE("eval-building with the builtin office writes units and cdf tables") {
    const auto dir = fresh_dir("office");
    const auto r = run_cli(
        "eval-building --builtin office --rooms-per-row 2 --corridors 1 --freq-ghz 28 --cell 2.5 "
        "--n-theta 120 --n-radial 48 --threads 2",
        dir);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir / "bwp_out_units.csv"));
    CHECK(fs::exists(dir / "bwp_out_cdf_g_i.csv"));
    CHECK(fs::exists(dir / "bwp_out_cdf_g_p.csv"));
    const std::string units = slurp(dir / "bwp_out_units.csv");
    CHECK(units.find("corridor") != std::string::npos);
    // CDF ends at probability 1
    const std::string cdf = slurp(dir / "bwp_out_cdf_g_i.csv");
    const auto last_comma = cdf.find_last_of(',');
    CHECK(std::stod(cdf.substr(last_comma + 1)) == 1.0);
}

TEST_CASE("sweep-frequency prints the argmax bracket") {
    const auto dir = fresh_dir("sweep_freq");
    const auto r = run_cli(
        "sweep-frequency --from 2 --to 10 --points 4 --area 20 --ar 1 --cell 2 --r-max 4000 "
        "--n-theta 90 --n-radial 48 --threads 2",
        dir);
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.find("f* = ") != std::string::npos);
    const std::string csv = slurp(dir / "bwp_out_frequency.csv");
    CHECK(csv.rfind("frequency_ghz,mean_g_i,mean_g_p\n", 0) == 0);
    // 4 data rows + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("train then predict on a training row stays close") {
    const auto dir = fresh_dir("train_predict");
    const auto r = run_cli(
        "train-surrogate --freq-ghz 28 --areas 20 --ars 1,2 --cell 1.2 --epochs 300 --seed 5 "
        "--n-theta 90 --n-radial 48 --threads 2 --model-out m.txt",
        dir);
    REQUIRE(r.exit_code == 0);
    double rmse_gi = -1.0;
    {
        std::istringstream out(r.stdout_text);
        std::string line;
        while (std::getline(out, line)) {
            if (line.rfind("val_rmse_g_i = ", 0) == 0) rmse_gi = std::stod(line.substr(15));
        }
    }
    REQUIRE(rmse_gi >= 0.0);

    const bwp::RoomSpec spec = bwp::RoomSpec::from_area_ar(20.0, 1.0);
    std::ostringstream args;
    args << "predict --model m.txt --x " << spec.width / 2 << " --y " << spec.length / 2 << " --width "
         << spec.width << " --length " << spec.length;
    const auto p = run_cli(args.str(), dir);
    REQUIRE(p.exit_code == 0);
    CHECK(p.stdout_text.find("g_i = ") != std::string::npos);
    CHECK(p.stdout_text.find("g_p = ") != std::string::npos);
}

TEST_CASE("the multiwall flag switches the NLOS gain path") {
    const auto dir_a = fresh_dir("mw_single");
    const auto dir_b = fresh_dir("mw_multi");
    const std::string base =
        "eval-room --width 5 --length 4 --freq-ghz 6 --cell 2 --n-theta 90 --n-radial 48 --wall-att 10";
    REQUIRE(run_cli(base, dir_a).exit_code == 0);
    REQUIRE(run_cli(base + " --nlos-model multiwall", dir_b).exit_code == 0);
    auto mean_gi = [](const fs::path& dir) {
        std::istringstream out(slurp(dir / "stdout.txt"));
        std::string line;
        double v = -1.0;
        while (std::getline(out, line))
            if (line.rfind("mean_g_i = ", 0) == 0) v = std::stod(line.substr(11));
        return v;
    };
    const double gi_single = mean_gi(dir_a);
    const double gi_multi = mean_gi(dir_b);
    CHECK(gi_single > 0.0);
    CHECK(gi_multi > 0.0);
    CHECK(gi_single != gi_multi);
    const std::string manifest = slurp(dir_b / "bwp_out.manifest.txt");
    CHECK(manifest.find("nlos_model = multiwall") != std::string::npos);
}

TEST_CASE("scenario file feeds the run and flags override it") {
    const auto dir = fresh_dir("scenario_file");
    {
        std::ofstream f(dir / "scen.txt");
        f << "frequency_ghz = 6\nr_max_m = 200\n";
    }
    const auto r = run_cli(
        "eval-room --scenario scen.txt --freq-ghz 28 --width 5 --length 4 --cell 2 --n-theta 90 "
        "--n-radial 48",
        dir);
    REQUIRE(r.exit_code == 0);
    const std::string manifest = slurp(dir / "bwp_out.manifest.txt");
    CHECK(manifest.find("frequency_ghz = 28") != std::string::npos);  // flag wins
    CHECK(manifest.find("r_max_m = 200") != std::string::npos);       // file value kept
}
