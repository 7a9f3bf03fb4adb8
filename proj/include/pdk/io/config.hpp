#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pdk/core/errors.hpp"
#include "pdk/core/sampled.hpp"
#include "pdk/io/csv.hpp"
#include "pdk/network/types.hpp"
#include "pdk/povm/detector.hpp"
#include "pdk/povm/fluctuations.hpp"
#include "pdk/wavepacket/targets.hpp"
#include "pdk/wavepacket/types.hpp"

namespace pdk {

using Json = nlohmann::json;

inline Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("config not found: " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw io_error("cannot parse '" + path.string() + "': " + e.what());
    }
    return j;
}

inline void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
}

// Paths inside a config are resolved against the config file's directory.
inline std::filesystem::path resolve_path(const std::filesystem::path& base_dir,
                                          const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base_dir / fp;
}

// ---- typed field access -------------------------------------------------

inline const Json& require_field(const Json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key))
        throw spec_error("missing config field '" + key + "'");
    return j.at(key);
}

inline double require_number(const Json& j, const std::string& key) {
    const Json& v = require_field(j, key);
    if (!v.is_number()) throw spec_error("config field '" + key + "' must be a number");
    return v.get<double>();
}

inline double number_or(const Json& j, const std::string& key, double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number()) throw spec_error("config field '" + key + "' must be a number");
    return v.get<double>();
}

inline long long require_integer(const Json& j, const std::string& key) {
    const Json& v = require_field(j, key);
    if (!v.is_number_integer()) throw spec_error("config field '" + key + "' must be an integer");
    return v.get<long long>();
}

inline long long integer_or(const Json& j, const std::string& key, long long fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number_integer()) throw spec_error("config field '" + key + "' must be an integer");
    return v.get<long long>();
}

inline bool bool_or(const Json& j, const std::string& key, bool fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_boolean()) throw spec_error("config field '" + key + "' must be a boolean");
    return v.get<bool>();
}

inline std::string require_string(const Json& j, const std::string& key) {
    const Json& v = require_field(j, key);
    if (!v.is_string()) throw spec_error("config field '" + key + "' must be a string");
    return v.get<std::string>();
}

inline std::string string_or(const Json& j, const std::string& key, std::string fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_string()) throw spec_error("config field '" + key + "' must be a string");
    return v.get<std::string>();
}

inline std::vector<double> number_array(const Json& v, const std::string& what) {
    if (!v.is_array()) throw spec_error(what + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const Json& e : v) {
        if (!e.is_number()) throw spec_error(what + " must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

// ---- domain objects ------------------------------------------------------

// {"min": a, "max": b, "points": n}
inline Grid grid_from_json(const Json& j, long long points_override = 0) {
    const double lo = require_number(j, "min");
    const double hi = require_number(j, "max");
    long long n = integer_or(j, "points", 513);
    if (points_override > 0) n = points_override;
    if (!(hi > lo)) throw spec_error("grid needs max > min");
    if (n < 2) throw spec_error("grid needs at least two points");
    return Grid::uniform(lo, hi, static_cast<std::size_t>(n));
}

// {"topology": "...", "states": [{"omega","gamma_in","gamma_out","mu"}...],
//  "couplings": [{"i","j","g"}...], "manifolds": [[...],[...]]}
inline NetworkSpec network_from_json(const Json& j) {
    NetworkSpec net;
    net.topology = topology_from_string(require_string(j, "topology"));

    const Json& states = require_field(j, "states");
    if (!states.is_array() || states.empty())
        throw spec_error("network needs a non-empty 'states' array");
    for (const Json& s : states) {
        DiscreteState st;
        st.omega = require_number(s, "omega");
        st.gamma_in = number_or(s, "gamma_in", 0.0);
        st.gamma_out = number_or(s, "gamma_out", 0.0);
        st.mu = number_or(s, "mu", 0.0);
        net.states.push_back(st);
    }

    if (j.contains("couplings")) {
        const Json& cs = j.at("couplings");
        if (!cs.is_array()) throw spec_error("'couplings' must be an array");
        for (const Json& c : cs) {
            StateCoupling sc;
            sc.i = static_cast<std::size_t>(require_integer(c, "i"));
            sc.j = static_cast<std::size_t>(require_integer(c, "j"));
            sc.g = require_number(c, "g");
            net.couplings.push_back(sc);
        }
    }

    if (j.contains("manifolds")) {
        const Json& ms = j.at("manifolds");
        if (!ms.is_array()) throw spec_error("'manifolds' must be an array of index arrays");
        for (const Json& m : ms) {
            if (!m.is_array()) throw spec_error("each manifold must be an array of state indices");
            std::vector<std::size_t> idx;
            for (const Json& e : m) {
                if (!e.is_number_integer()) throw spec_error("manifold entries must be integers");
                idx.push_back(static_cast<std::size_t>(e.get<long long>()));
            }
            net.manifolds.push_back(std::move(idx));
        }
    }

    net.validate();
    return net;
}

inline Json network_to_json(const NetworkSpec& net) {
    Json j;
    j["topology"] = to_string(net.topology);
    j["states"] = Json::array();
    for (const DiscreteState& s : net.states) {
        Json e;
        e["omega"] = s.omega;
        e["gamma_in"] = s.gamma_in;
        e["gamma_out"] = s.gamma_out;
        if (s.mu != 0.0) e["mu"] = s.mu;
        j["states"].push_back(e);
    }
    if (!net.couplings.empty()) {
        j["couplings"] = Json::array();
        for (const StateCoupling& c : net.couplings)
            j["couplings"].push_back({{"i", c.i}, {"j", c.j}, {"g", c.g}});
    }
    if (!net.manifolds.empty()) j["manifolds"] = net.manifolds;
    return j;
}

// Coupling schedules travel as CSV with columns t, kappa, delta.
inline CouplingSchedule schedule_from_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    if (table.columns.size() != 3)
        throw io_error("'" + path + "': expected columns t,kappa,delta");
    if (table.rows.size() < 2) throw io_error("'" + path + "': need at least two rows");
    std::vector<double> t, kappa, delta;
    for (const auto& r : table.rows) {
        t.push_back(r[0]);
        kappa.push_back(r[1]);
        delta.push_back(r[2]);
    }
    CouplingSchedule sched;
    sched.grid = Grid(std::move(t));
    sched.kappa = std::move(kappa);
    sched.delta = std::move(delta);
    sched.validate();
    return sched;
}

inline void write_schedule_csv(const std::string& path, const CouplingSchedule& sched) {
    CsvWriter out(path, {"t", "kappa", "delta"});
    const auto& t = sched.grid.points();
    for (std::size_t i = 0; i < t.size(); ++i) out.row({t[i], sched.kappa[i], sched.delta[i]});
}

// Target wavepacket: {"kind": "gaussian"|"orthogonal-pulse"|"file", ...}.
// Analytic kinds need the sampling window passed in; "file" carries its own grid
// as CSV columns t, amplitude, phase.
inline TargetWavepacket target_from_json(const Json& j, const Grid* window,
                                         const std::filesystem::path& base_dir) {
    const std::string kind = require_string(j, "kind");
    if (kind == "file") {
        const std::string path = resolve_path(base_dir, require_string(j, "path")).string();
        const CsvTable table = read_csv(path);
        if (table.columns.size() != 3)
            throw io_error("'" + path + "': expected columns t,amplitude,phase");
        std::vector<double> t, amp, ph;
        for (const auto& r : table.rows) {
            t.push_back(r[0]);
            amp.push_back(r[1]);
            ph.push_back(r[2]);
        }
        TargetWavepacket target;
        target.grid = Grid(std::move(t));
        target.amplitude = std::move(amp);
        target.phase = std::move(ph);
        target.validate();
        return target;
    }
    if (window == nullptr)
        throw spec_error("an analytic target needs a sampling window");
    if (kind == "gaussian") {
        const double sigma = require_number(j, "sigma");
        const double center = require_number(j, "center");
        const double carrier = number_or(j, "carrier", 0.0);
        return gaussian_target(sigma, center, carrier, *window);
    }
    if (kind == "orthogonal-pulse") {
        const double sigma = require_number(j, "sigma");
        const double center = require_number(j, "center");
        const long long order = integer_or(j, "order", 1);
        const double dead_zone = require_number(j, "dead_zone");
        const double smoothing = number_or(j, "smoothing", dead_zone);
        return build_orthogonal_pulse(sigma, center, static_cast<int>(order), dead_zone,
                                      smoothing, *window);
    }
    throw spec_error("unknown target kind '" + kind + "'");
}

// {"k_min": 2} or {"clicks": [2, 3]}
inline ClickSet clicks_from_json(const Json& j) {
    if (j.contains("clicks")) {
        const Json& arr = j.at("clicks");
        if (!arr.is_array() || arr.empty())
            throw spec_error("'clicks' must be a non-empty integer array");
        std::vector<long long> ks;
        for (const Json& e : arr) {
            if (!e.is_number_integer()) throw spec_error("'clicks' entries must be integers");
            ks.push_back(e.get<long long>());
        }
        ClickSet set = ClickSet::exactly(std::move(ks));
        set.validate();
        return set;
    }
    ClickSet set = ClickSet::at_least(integer_or(j, "k_min", 1));
    set.validate();
    return set;
}

// {"parameters": [{"parameter","distribution","width"|"offsets"+"probabilities"}...],
//  "samples": n, "strict": bool}
inline FluctuationSpec fluctuations_from_json(const Json& j) {
    FluctuationSpec spec;
    const Json& params = require_field(j, "parameters");
    if (!params.is_array() || params.empty())
        throw spec_error("'parameters' must be a non-empty array");
    for (const Json& p : params) {
        ParameterFluctuation f;
        f.parameter = require_string(p, "parameter");
        f.distribution = string_or(p, "distribution", "uniform");
        f.width = number_or(p, "width", 0.0);
        if (p.contains("offsets")) f.offsets = number_array(p.at("offsets"), "'offsets'");
        if (p.contains("probabilities"))
            f.probabilities = number_array(p.at("probabilities"), "'probabilities'");
        f.validate();
        spec.parameters.push_back(std::move(f));
    }
    spec.samples = static_cast<std::size_t>(integer_or(j, "samples", 256));
    spec.strict = bool_or(j, "strict", false);
    if (spec.samples < 2) throw spec_error("fluctuation sampling needs at least two samples");
    return spec;
}

} // namespace pdk
