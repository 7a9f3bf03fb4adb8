#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdk/pdk.hpp"

namespace {

void print_error(const std::string& code, const std::string& message,
                 const nlohmann::json& detail) {
    nlohmann::json j;
    j["error"]["code"] = code;
    j["error"]["message"] = message;
    if (!detail.empty()) j["error"]["detail"] = detail;
    std::cerr << j.dump() << std::endl;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pdk: single-photon detector kit (network transmission, wavepacket design, "
                 "amplification noise, POVM assembly)"};
    app.require_subcommand(1);

    std::string config;
    std::string out = "out";
    std::uint64_t seed = 12345;
    long long grid_points = 0;

    const std::pair<const char*, const char*> commands[] = {
        {"transmit", "Evaluate transmission/reflection spectra and derived spectral metrics"},
        {"wavepacket", "Design or propagate a time-dependent coupling schedule"},
        {"amplify", "Sweep amplification schemes: variances, SNR and Monte Carlo checks"},
        {"povm", "Assemble the detector POVM weights and projected spectral state"},
        {"design", "Inverse problems: couplings, mode matching, perfect transmission"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON configuration file")->required();
        sub->add_option("--out", out, "output directory (created if missing)");
        sub->add_option("--seed", seed, "seed for every stochastic step");
        sub->add_option("--grid-points", grid_points, "override the point count of every grid");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    const pdk::RunOptions opt{seed, grid_points};
    try {
        if (cmd == "transmit") pdk::run_transmit(config, out, opt);
        else if (cmd == "wavepacket") pdk::run_wavepacket(config, out, opt);
        else if (cmd == "amplify") pdk::run_amplify(config, out, opt);
        else if (cmd == "povm") pdk::run_povm(config, out, opt);
        else if (cmd == "design") pdk::run_design(config, out, opt);
    } catch (const pdk::infeasible_error& e) {
        nlohmann::json detail;
        if (e.has_location()) detail["location"] = e.location();
        print_error(e.code(), e.what(), detail);
        return 3;
    } catch (const pdk::numeric_error& e) {
        print_error(e.code(), e.what(), {});
        return 4;
    } catch (const pdk::error& e) {
        print_error(e.code(), e.what(), {});
        return 2;
    } catch (const std::exception& e) {
        print_error("internal", e.what(), {});
        return 4;
    }
    return 0;
}
