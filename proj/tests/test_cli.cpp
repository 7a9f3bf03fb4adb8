// End-to-end checks of the command-line tool against the shipped presets:
// every subcommand is launched as a real subprocess, and the written reports
// and CSV exports are compared to closed-form expectations.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
    fs::path out_dir;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_root() {
    const fs::path root = fs::temp_directory_path() / "pdk_cli_tests";
    fs::create_directories(root);
    return root;
}

std::string preset(const std::string& name) {
    return std::string(PDK_PRESET_DIR) + "/" + name;
}

// Launch the tool with the given subcommand/arguments, capturing exit code
// and both streams.  `tag` names the per-invocation scratch directory.
RunResult run_cli(const std::string& tag, const std::string& args,
                  bool fresh_out = true) {
    const fs::path dir = scratch_root() / tag;
    const fs::path out_dir = dir / "out";
    if (fresh_out) fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path out_log = dir / "stdout.txt";
    const fs::path err_log = dir / "stderr.txt";
    const std::string cmd = std::string(PDK_CLI_PATH) + " " + args + " --out " +
                            out_dir.string() + " > " + out_log.string() + " 2> " +
                            err_log.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    REQUIRE(WIFEXITED(status));
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out_log);
    r.err = slurp(err_log);
    r.out_dir = out_dir;
    return r;
}

Json report_of(const RunResult& r) {
    return Json::parse(slurp(r.out_dir / "report.json"));
}

Json error_of(const RunResult& r) { return Json::parse(r.err); }

// Number of data rows (header excluded).
std::size_t csv_rows(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++n;
    REQUIRE(n >= 1);
    return n - 1;
}

struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvData read_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    CsvData d;
    std::string line;
    REQUIRE(std::getline(in, line));
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) d.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        while (std::getline(rs, cell, ','))
            row.push_back(std::strtod(cell.c_str(), nullptr));
        REQUIRE(row.size() == d.header.size());
        d.rows.push_back(std::move(row));
    }
    return d;
}

constexpr double kPiLocal = 3.141592653589793238462643383279502884;

} // namespace

TEST_CASE("cli transmit: lossy resonance metrics match closed forms") {
    const RunResult r =
        run_cli("fabry_perot", "transmit --config " + preset("fabry_perot.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    CHECK(rep.at("topology") == "simple");
    CHECK(rep.at("states") == 1);
    CHECK(rep.at("unitarity_max_defect").get<double>() < 1e-12);
    CHECK(rep.at("group_delay_resolved") == true);

    // Equivalent bandwidth 2*g*G/(g+G), dispersion g*G/a^3 with a=(g+G)/2.
    CHECK(rep.at("bandwidth").at("value").get<double>() ==
          Catch::Approx(1.5).epsilon(1e-6));
    CHECK(rep.at("dispersion").get<double>() == Catch::Approx(0.375).epsilon(1e-4));

    // One resonant maximum at 4*g*G/(g+G)^2.
    REQUIRE(rep.at("peak_count") == 1);
    const Json peak = rep.at("peaks").at(0);
    CHECK(std::abs(peak.at("omega").get<double>()) < 1e-6);
    CHECK(peak.at("t_squared").get<double>() == Catch::Approx(0.75).margin(1e-9));

    // Full pi of transmission phase minus the finite-window deficit.
    CHECK(std::abs(rep.at("phase").at("magnitude").get<double>() - kPiLocal) < 0.05);

    CHECK(csv_rows(r.out_dir / "spectrum.csv") == 60001);
    const std::string head = slurp(r.out_dir / "spectrum.csv").substr(0, 60);
    CHECK(head.rfind("omega,re_t,im_t,re_r,im_r,t_squared,group_delay", 0) == 0);
}

TEST_CASE("cli transmit: balanced resonance reaches unit transmission") {
    const RunResult r = run_cli("balanced_resonance",
                                "transmit --config " + preset("balanced_resonance.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    CHECK(rep.at("bandwidth").at("value").get<double>() ==
          Catch::Approx(1.0).epsilon(1e-6));
    CHECK(rep.at("dispersion").get<double>() == Catch::Approx(1.0).epsilon(1e-4));
    REQUIRE(rep.at("peak_count") == 1);
    const Json peak = rep.at("peaks").at(0);
    CHECK(std::abs(peak.at("omega").get<double>()) < 1e-6);
    CHECK(peak.at("t_squared").get<double>() >= 1.0 - 1e-12);
    CHECK(peak.at("t_squared").get<double>() <= 1.0 + 1e-12);
}

TEST_CASE("cli transmit: symmetric parallel cluster keeps its full winding") {
    const RunResult r =
        run_cli("parallel_phase", "transmit --config " + preset("parallel_phase.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    // Four identical balanced emitters: equivalent bandwidth 4.
    CHECK(rep.at("bandwidth").at("value").get<double>() ==
          Catch::Approx(4.0).epsilon(1e-6));

    // Three interior transmission zeros sit exactly on grid samples, so the
    // winding keeps all four resonances while excluding the sign flips.
    CHECK(rep.at("phase").at("excluded_jumps") == 3);
    CHECK(std::abs(rep.at("phase").at("magnitude").get<double>() - 4.0 * kPiLocal) < 0.1);
    CHECK(rep.at("group_delay_resolved") == true);
    CHECK(rep.at("dispersion").get<double>() >= 0.0);

    // Unit maxima at every emitter frequency (+-sqrt2, +-sqrt6).
    REQUIRE(rep.at("peak_count") == 4);
    std::vector<double> omegas;
    for (const Json& p : rep.at("peaks")) {
        CHECK(p.at("t_squared").get<double>() >= 1.0 - 1e-9);
        omegas.push_back(p.at("omega").get<double>());
    }
    std::sort(omegas.begin(), omegas.end());
    const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
    const std::vector<double> expect = {-s6, -s2, s2, s6};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(omegas[i] - expect[i]) < 1e-6);
}

TEST_CASE("cli transmit: uneven parallel rates with a common ratio") {
    const RunResult r = run_cli("unbalanced_parallel",
                                "transmit --config " + preset("unbalanced_parallel.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    // Sum of 2*g_i*G_i/(g_i+G_i) = 1.6 * (0.8+1.2+1.0).
    CHECK(rep.at("bandwidth").at("value").get<double>() ==
          Catch::Approx(4.8).epsilon(1e-6));
    CHECK_FALSE(rep.contains("phase"));
    // The grid cannot resolve the phase near the interior transmission zeros,
    // so the group-delay diagnostic degrades instead of aborting the export.
    CHECK(rep.at("group_delay_resolved") == false);

    // Every emitter peaks at 4k/(1+k)^2 = 0.64 for k = 4.
    REQUIRE(rep.at("peak_count") == 3);
    std::vector<double> omegas;
    for (const Json& p : rep.at("peaks")) {
        CHECK(p.at("t_squared").get<double>() == Catch::Approx(0.64).margin(1e-9));
        omegas.push_back(p.at("omega").get<double>());
    }
    std::sort(omegas.begin(), omegas.end());
    const std::vector<double> expect = {-3.0, 0.0, 2.0};
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(omegas[i] - expect[i]) < 1e-6);

    CHECK(csv_rows(r.out_dir / "spectrum.csv") == 48001);
}

TEST_CASE("cli transmit: weakly coupled comb recovers every unity peak") {
    const RunResult r =
        run_cli("series_comb", "transmit --config " + preset("series_comb.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    CHECK(rep.at("topology") == "series");
    CHECK(rep.at("states") == 70);
    // Supermode lines are far narrower than the grid step: the group-delay
    // column degrades to NaN and the gated metrics are disabled in the preset.
    CHECK(rep.at("group_delay_resolved") == false);
    CHECK_FALSE(rep.contains("bandwidth"));
    CHECK_FALSE(rep.contains("phase"));
    CHECK_FALSE(rep.contains("dispersion"));

    REQUIRE(rep.at("peak_count") == 70);
    double max_abs = 0.0;
    for (const Json& p : rep.at("peaks")) {
        CHECK(p.at("t_squared").get<double>() >= 1.0 - 1e-6);
        CHECK(p.at("t_squared").get<double>() <= 1.0 + 1e-9);
        max_abs = std::max(max_abs, std::abs(p.at("omega").get<double>()));
    }
    // Band edge at 2*g*cos(pi/71).
    CHECK(max_abs == Catch::Approx(60.0 * std::cos(kPiLocal / 71.0)).margin(1e-3));
    CHECK(csv_rows(r.out_dir / "spectrum.csv") == 90001);
}

TEST_CASE("cli transmit: chained manifolds through the dense solver") {
    const RunResult r =
        run_cli("hybrid_ladder", "transmit --config " + preset("hybrid_ladder.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    CHECK(rep.at("topology") == "hybrid");
    CHECK(rep.at("states") == 4);
    CHECK(rep.at("unitarity_max_defect").get<double>() < 1e-10);
    CHECK(rep.at("bandwidth").at("value").get<double>() > 0.0);
    CHECK(csv_rows(r.out_dir / "spectrum.csv") == 30001);
}

TEST_CASE("cli transmit: emission into a side channel") {
    const RunResult r =
        run_cli("side_channel", "transmit --config " + preset("side_channel.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    // a = (g + G + mu)/2 = 1.75; the side channel reshapes every metric.
    CHECK(rep.at("unitarity_max_defect").get<double>() < 1e-10);
    CHECK(rep.at("bandwidth").at("value").get<double>() ==
          Catch::Approx(2.0 / 1.75).epsilon(1e-6));
    CHECK(rep.at("dispersion").get<double>() ==
          Catch::Approx(2.0 / (1.75 * 1.75 * 1.75)).epsilon(1e-4));
    CHECK(std::abs(rep.at("phase").at("magnitude").get<double>() - kPiLocal) < 0.05);
    REQUIRE(rep.at("peak_count") == 1);
    CHECK(rep.at("peaks").at(0).at("t_squared").get<double>() ==
          Catch::Approx(2.0 / 3.0625).margin(1e-9));

    const CsvData csv = read_csv(r.out_dir / "spectrum.csv");
    REQUIRE(csv.header.size() == 9);
    CHECK(csv.header[7] == "re_d");
    CHECK(csv.header[8] == "im_d");
    REQUIRE(csv.rows.size() == 20001);
    const std::vector<double>& mid = csv.rows[10000]; // omega = 0
    REQUIRE(std::abs(mid[0]) < 1e-9);
    const double d2 = mid[7] * mid[7] + mid[8] * mid[8];
    CHECK(d2 == Catch::Approx(0.5 / 3.0625).margin(1e-9)); // mu*g/a^2
}

TEST_CASE("cli wavepacket: gaussian capture schedule") {
    const RunResult r = run_cli("gaussian_capture",
                                "wavepacket --config " + preset("gaussian_capture.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    CHECK(rep.at("mode") == "design");
    // Window ends two intensity widths past the pulse centre.
    CHECK(rep.at("weight").get<double>() ==
          Catch::Approx(0.9772498680518208).margin(1e-7));
    CHECK(std::abs(rep.at("window_mass").get<double>() - rep.at("weight").get<double>()) <
          1e-9);
    CHECK(rep.at("detection_time").get<double>() == Catch::Approx(6.0).margin(1e-12));
    CHECK(rep.at("round_trip_l2").get<double>() < 1e-8);
    CHECK(rep.at("warnings").empty());
    CHECK(csv_rows(r.out_dir / "amplitude.csv") == 10001);
    CHECK(csv_rows(r.out_dir / "schedule.csv") == 10001);
}

TEST_CASE("cli wavepacket: pulse orthogonal to its gaussian base") {
    const RunResult r = run_cli("orthogonal_pulse",
                                "wavepacket --config " + preset("orthogonal_pulse.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    CHECK(rep.at("mode") == "design");
    // The pulse is renormalized to unit mass inside the window, so the
    // schedule absorbs it completely and the coupling cap must engage.
    CHECK(rep.at("weight").get<double>() == Catch::Approx(1.0).margin(1e-12));
    CHECK(rep.at("warnings").size() >= 1);
    CHECK(rep.at("base_overlap").get<double>() < 1e-6);
    CHECK(csv_rows(r.out_dir / "amplitude.csv") == 8001);
}

TEST_CASE("cli wavepacket: forward run of a stored schedule") {
    const RunResult r = run_cli("forward_schedule",
                                "wavepacket --config " + preset("forward_schedule.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    CHECK(rep.at("mode") == "forward");
    // Constant kappa = 0.3 over five time units: weight 1 - exp(-1.5).
    CHECK(rep.at("weight").get<double>() ==
          Catch::Approx(1.0 - std::exp(-1.5)).margin(1e-12));
    CHECK(rep.at("detection_time").get<double>() == Catch::Approx(5.0).margin(1e-12));
    CHECK_FALSE(rep.contains("window_mass"));
    CHECK_FALSE(rep.contains("round_trip_l2"));
    CHECK(csv_rows(r.out_dir / "amplitude.csv") == 51);
}

TEST_CASE("cli amplify: gain sweep with stochastic cross-check") {
    const std::string base = "amplify --config " + preset("amplifier_sweep.json");
    const RunResult r = run_cli("amplifier_sweep", base);
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    REQUIRE(rep.at("gains").size() == 10);
    CHECK(rep.at("monte_carlo").at("samples") == 20000);
    CHECK(rep.at("seed") == 12345);

    const CsvData csv = read_csv(r.out_dir / "sweep.csv");
    REQUIRE(csv.header.size() == 23);
    REQUIRE(csv.rows.size() == 10);
    const auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < csv.header.size(); ++i)
            if (csv.header[i] == name) return i;
        FAIL("missing column " + name);
        return std::size_t{0};
    };
    const std::size_t c_gain = col("gain");
    const std::size_t c_sm_bound = col("single_mode_bound");
    const std::size_t c_mm_bound = col("multimode_bound");
    const std::size_t c_sm_var = col("single_mode_variance");
    const std::size_t c_mm_var = col("multimode_variance");
    const std::size_t c_sm_mc = col("single_mode_mc_variance");
    const std::size_t c_sm_se = col("single_mode_mc_stderr");
    const std::size_t c_mm_mc = col("multimode_mc_variance");
    const std::size_t c_mm_se = col("multimode_mc_stderr");

    double expect_gain = 2.0;
    for (const auto& row : csv.rows) {
        CHECK(row[c_gain] == Catch::Approx(expect_gain).epsilon(1e-12));
        expect_gain *= 2.0;
        // Single-mode readout beats the multimode one by exactly sqrt(G).
        CHECK(row[c_sm_bound] / row[c_mm_bound] ==
              Catch::Approx(std::sqrt(row[c_gain])).epsilon(1e-12));
        CHECK(row[c_sm_var] > 0.0);
        CHECK(row[c_mm_var] > 0.0);
        CHECK(row[c_sm_se] > 0.0);
        CHECK(row[c_mm_se] > 0.0);
        CHECK(std::abs(row[c_sm_mc] - row[c_sm_var]) < 5.0 * row[c_sm_se]);
        CHECK(std::abs(row[c_mm_mc] - row[c_mm_var]) < 5.0 * row[c_mm_se]);
    }

    // Same seed: byte-identical sweep; another seed: different draws.
    const RunResult again = run_cli("amplifier_sweep_again", base);
    REQUIRE(again.exit_code == 0);
    CHECK(slurp(r.out_dir / "sweep.csv") == slurp(again.out_dir / "sweep.csv"));
    const RunResult other = run_cli("amplifier_sweep_other", base + " --seed 999");
    REQUIRE(other.exit_code == 0);
    CHECK(slurp(r.out_dir / "sweep.csv") != slurp(other.out_dir / "sweep.csv"));
}

TEST_CASE("cli povm: thermal readout with a filtered gaussian trigger") {
    const RunResult r =
        run_cli("detector_povm", "povm --config " + preset("detector_povm.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    const double w0 = rep.at("w0").get<double>();
    const double wT = rep.at("wT").get<double>();
    CHECK(w0 > 0.0);
    CHECK(wT > 0.0);
    CHECK(w0 + wT <= 1.0 + 1e-10);
    const double purity = rep.at("purity").get<double>();
    CHECK(purity >= 0.5);
    CHECK(purity <= 1.0 + 1e-12);

    // Lossless filter: the trigger either passes or reflects.
    const double tau = rep.at("tau").get<double>();
    const double rho = rep.at("rho").get<double>();
    CHECK(tau * tau + rho * rho == Catch::Approx(1.0).margin(1e-6));
    CHECK(tau * tau > 0.80);
    CHECK(tau * tau < 0.88);

    CHECK(rep.at("weight").get<double>() > 0.9999);
    CHECK(rep.at("detection_time").get<double>() == Catch::Approx(0.0).margin(1e-12));

    // Thermal occupations: explicit readout frequency, trigger centroid.
    CHECK(rep.at("n_bar_readout").get<double>() ==
          Catch::Approx(1.0 / std::expm1(1.5)).epsilon(1e-9));
    CHECK(rep.at("n_bar_trigger").get<double>() ==
          Catch::Approx(1.0 / std::expm1(5.0)).epsilon(2e-2));

    // Time-frequency localization of the projected state.
    CHECK(rep.at("product").get<double>() > 8.0);
    CHECK(rep.at("product").get<double>() < 16.0);
    CHECK(rep.at("bin_t").get<double>() > 0.0);
    CHECK(rep.at("bin_omega").get<double>() > 0.0);

    const Json& fl = rep.at("fluctuations");
    CHECK(fl.at("valid_samples") == 64);
    CHECK(fl.at("skipped_samples") == 0);
    CHECK(fl.at("wT").get<double>() == Catch::Approx(wT).epsilon(0.1));
    CHECK(fl.at("purity").get<double>() > 0.0);
    CHECK(fl.at("purity").get<double>() <= 1.0 + 1e-12);

    const Json& sr = rep.at("super_resolution");
    CHECK(sr.at("p1").get<double>() == Catch::Approx(0.1 / 1.01).epsilon(1e-12));
    CHECK(sr.at("p2").get<double>() == Catch::Approx(0.001 / 1.01).epsilon(1e-12));
    CHECK(sr.at("trials") == 200000);
    CHECK(sr.at("n1").get<long long>() > 0);
    CHECK(std::abs(sr.at("epsilon_hat").get<double>() - 0.01) < 0.008);
    CHECK(sr.at("stderr").get<double>() > 5e-4);
    CHECK(sr.at("stderr").get<double>() < 5e-3);

    CHECK(csv_rows(r.out_dir / "projected.csv") == 16384);

    // Infinite integration window: the toy weights collapse to |T|^2, which
    // peaks at the filter frequency.
    const CsvData toy = read_csv(r.out_dir / "toy.csv");
    REQUIRE(toy.header.size() == 2);
    REQUIRE(toy.rows.size() == 16384);
    double best = 1e300, best_weight = 0.0;
    for (const auto& row : toy.rows) {
        const double dist = std::abs(row[0] - 5.0);
        if (dist < best) {
            best = dist;
            best_weight = row[1];
        }
    }
    CHECK(best_weight > 0.99);
}

TEST_CASE("cli design: two-state chain tuned for unit transmission") {
    const RunResult r =
        run_cli("two_state_design", "design --config " + preset("two_state_design.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    CHECK(rep.at("task") == "two-state-series");
    // w* = (G w1 - g w2)/(G - g) = 2;  g12^2 = gG/4 + gG d^2/(G-g)^2 = 3.75.
    CHECK(rep.at("omega_star").get<double>() == Catch::Approx(2.0).margin(1e-12));
    CHECK(rep.at("g12").get<double>() ==
          Catch::Approx(std::sqrt(3.75)).epsilon(1e-12));
    CHECK(rep.at("t_squared_at_star").get<double>() >= 1.0 - 1e-9);
}

TEST_CASE("cli design: trigger spectrum matched through a resonant filter") {
    const RunResult r = run_cli("mode_matched_design",
                                "design --config " + preset("mode_matched_design.json"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    const Json rep = report_of(r);
    const double tau = rep.at("tau").get<double>();
    const double rho = rep.at("rho").get<double>();
    // tau^2 = 1/(1 + Var(omega)) = 0.8 for a width-0.5 gaussian target on a
    // unit-width balanced resonance.
    CHECK(tau == Catch::Approx(std::sqrt(0.8)).margin(1e-6));
    CHECK(rho == Catch::Approx(std::sqrt(0.2)).margin(1e-6));
    CHECK(tau * tau + rho * rho == Catch::Approx(1.0).margin(1e-9));
    CHECK(rep.at("overlap_ratio").get<double>() == Catch::Approx(1.0).margin(1e-6));
    CHECK(rep.at("detection_time").get<double>() == Catch::Approx(3.0).margin(1e-12));
    CHECK(csv_rows(r.out_dir / "designed.csv") == 1601);
}

TEST_CASE("cli design: target spanning a transmission gap is refused") {
    const RunResult r =
        run_cli("band_gap_probe", "design --config " + preset("band_gap_probe.json"));
    REQUIRE(r.exit_code == 3);

    const Json err = error_of(r);
    CHECK(err.at("error").at("code") == "infeasible");
    CHECK(err.at("error").at("message").get<std::string>().find(
              "transmission vanishes") != std::string::npos);
    REQUIRE(err.at("error").contains("detail"));
    CHECK(std::abs(err.at("error").at("detail").at("location").get<double>()) <= 1e-3);
}

TEST_CASE("cli: error reporting and option overrides") {
    SECTION("missing config file") {
        const RunResult r = run_cli("missing_config",
                                    "transmit --config " + preset("no_such_file.json"));
        CHECK(r.exit_code == 2);
        CHECK(error_of(r).at("error").at("code") == "io");
    }
    SECTION("malformed config file") {
        const fs::path bad = scratch_root() / "broken.json";
        std::ofstream(bad) << "{ this is not json";
        const RunResult r = run_cli("broken_config", "transmit --config " + bad.string());
        CHECK(r.exit_code == 2);
        CHECK(error_of(r).at("error").at("code") == "io");
    }
    SECTION("unknown design task") {
        const fs::path cfg = scratch_root() / "bogus_task.json";
        std::ofstream(cfg) << "{\"task\": \"frobnicate\"}";
        const RunResult r = run_cli("bogus_task", "design --config " + cfg.string());
        CHECK(r.exit_code == 2);
        CHECK(error_of(r).at("error").at("code") == "spec");
    }
    SECTION("unknown subcommand") {
        const RunResult r = run_cli("bad_subcommand", "frobnicate --config x.json");
        CHECK(r.exit_code == 2);
    }
    SECTION("missing required option") {
        const RunResult r = run_cli("no_config", "transmit");
        CHECK(r.exit_code == 2);
    }
    SECTION("grid point override") {
        const RunResult r =
            run_cli("grid_override", "transmit --config " + preset("fabry_perot.json") +
                                         " --grid-points 5001");
        CAPTURE(r.err);
        REQUIRE(r.exit_code == 0);
        CHECK(csv_rows(r.out_dir / "spectrum.csv") == 5001);
        CHECK(report_of(r).at("grid").at("points") == 5001);
    }
}
