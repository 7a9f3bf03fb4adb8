#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pdk/amplification/monte_carlo.hpp"
#include "pdk/amplification/schemes.hpp"
#include "pdk/amplification/thermal.hpp"
#include "pdk/core/bandwidth.hpp"
#include "pdk/core/errors.hpp"
#include "pdk/core/fourier.hpp"
#include "pdk/core/phase.hpp"
#include "pdk/core/quadrature.hpp"
#include "pdk/core/sampled.hpp"
#include "pdk/io/config.hpp"
#include "pdk/io/csv.hpp"
#include "pdk/network/analysis.hpp"
#include "pdk/network/transfer.hpp"
#include "pdk/network/types.hpp"
#include "pdk/povm/assemble.hpp"
#include "pdk/povm/design.hpp"
#include "pdk/povm/detector.hpp"
#include "pdk/povm/fluctuations.hpp"
#include "pdk/povm/superres.hpp"
#include "pdk/povm/toy.hpp"
#include "pdk/wavepacket/forward.hpp"
#include "pdk/wavepacket/inverse.hpp"
#include "pdk/wavepacket/targets.hpp"
#include "pdk/wavepacket/types.hpp"

namespace pdk {

struct RunOptions {
    std::uint64_t seed = 12345;
    long long grid_points = 0; // > 0 overrides every grid "points" field
};

namespace detail {

inline void prepare_out(const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create output directory '" + out_dir.string() + "'");
}

inline NetworkSpec network_from_config(const Json& cfg, const std::filesystem::path& base_dir) {
    const Json& net = require_field(cfg, "network");
    if (net.is_string())
        return network_from_json(load_json(resolve_path(base_dir, net.get<std::string>())));
    return network_from_json(net);
}

inline bool nearly_equal(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

// Evaluate a network on a grid.  "auto" prefers the closed forms when the
// description matches one and falls back to the dense linear solve; "closed"
// insists on a closed form; "direct" always solves the linear system.
inline TransferResult evaluate_network(const NetworkSpec& net, const Grid& grid,
                                       const std::string& method) {
    if (method == "direct") return transfer_direct(net, grid);
    if (method != "auto" && method != "closed")
        throw spec_error("unknown method '" + method + "' (use auto, closed or direct)");

    if (!net.has_side_channel()) {
        switch (net.topology) {
            case Topology::simple: {
                const DiscreteState& s = net.states.front();
                if (s.gamma_in > 0.0 && s.gamma_out > 0.0)
                    return transfer_simple(s.gamma_in, s.gamma_out, s.omega, grid);
                break;
            }
            case Topology::parallel: {
                bool homogeneous = true, uniform_ratio = true, positive = true;
                const double g0 = net.states.front().gamma_in;
                const double G0 = net.states.front().gamma_out;
                for (const DiscreteState& s : net.states) {
                    if (s.gamma_in <= 0.0 || s.gamma_out <= 0.0) positive = false;
                    if (!nearly_equal(s.gamma_in, g0, 1e-12) ||
                        !nearly_equal(s.gamma_out, G0, 1e-12))
                        homogeneous = false;
                    if (positive && !nearly_equal(s.gamma_out * g0, G0 * s.gamma_in, 1e-12))
                        uniform_ratio = false;
                }
                if (!positive) break;
                if (homogeneous) {
                    std::vector<double> omegas;
                    for (const DiscreteState& s : net.states) omegas.push_back(s.omega);
                    return transfer_parallel_homogeneous(omegas, g0, G0, grid);
                }
                if (uniform_ratio) {
                    std::vector<ResonantMode> modes;
                    for (const DiscreteState& s : net.states)
                        modes.push_back({s.omega, s.gamma_in});
                    return transfer_parallel_unbalanced(modes, G0 / g0, grid);
                }
                break;
            }
            case Topology::series: {
                const double gamma = net.states.front().gamma_in;
                const double Gamma = net.states.back().gamma_out;
                if (gamma <= 0.0 || Gamma <= 0.0) break;
                std::vector<double> omegas, gs;
                for (const DiscreteState& s : net.states) omegas.push_back(s.omega);
                gs.resize(net.couplings.size());
                for (const StateCoupling& c : net.couplings) gs[std::min(c.i, c.j)] = c.g;
                return transfer_series(omegas, gamma, Gamma, gs, grid);
            }
            default:
                break;
        }
    }
    if (method == "closed")
        throw spec_error("no closed form matches this network; use method 'direct'");
    return transfer_direct(net, grid);
}

// Peak search refined against the exact response at arbitrary frequencies.
// Resonances of weakly coupled supermodes can be far narrower than any
// practical grid step, so a parabola through grid samples underestimates the
// true heights; golden-section refinement of each bracketed maximum against
// the actual response recovers them.
inline std::vector<TransmissionPeak> refined_peaks(const NetworkSpec& net,
                                                   const TransferResult& sampled,
                                                   const std::string& method,
                                                   const PeakSearchOptions& opt) {
    const auto t2_of = [&](double w) {
        const double eps = 1.0 + std::abs(w);
        const Grid probe(std::vector<double>{w, w + eps});
        return std::norm(evaluate_network(net, probe, method).T[0]);
    };
    return find_perfect_transmission(sampled, t2_of, opt);
}

inline std::complex<double> overlap_integral(const SpectralFunction& a,
                                             const SpectralFunction& b) {
    require_same_grid(a.grid, b.grid, "overlap operands");
    std::vector<std::complex<double>> prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = std::conj(a.values[i]) * b.values[i];
    return trapezoid(prod, a.grid);
}

// Mean and standard deviation of a coordinate under the density |f|^2.
inline std::pair<double, double> density_moments(const Sampled& f) {
    const std::size_t n = f.size();
    std::vector<double> d(n), xd(n), xxd(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = f.grid[i];
        d[i] = std::norm(f.values[i]);
        xd[i] = x * d[i];
        xxd[i] = x * x * d[i];
    }
    const double mass = trapezoid(d, f.grid);
    if (mass <= 0.0) throw numeric_error("state carries no spectral weight");
    const double mean = trapezoid(xd, f.grid) / mass;
    const double var = trapezoid(xxd, f.grid) / mass - mean * mean;
    return {mean, std::sqrt(std::max(var, 0.0))};
}

// Normalized spectral profile used as a detection target in design tasks.
inline SpectralFunction spectrum_from_json(const Json& j, const Grid* grid,
                                           const std::filesystem::path& base_dir) {
    const std::string kind = require_string(j, "kind");
    SpectralFunction f;
    if (kind == "gaussian") {
        if (grid == nullptr) throw spec_error("an analytic spectrum needs a grid");
        const double sigma = require_number(j, "sigma");
        const double center = number_or(j, "center", 0.0);
        if (sigma <= 0.0) throw parameter_error("spectral width must be positive");
        f.grid = *grid;
        f.values.resize(grid->size());
        for (std::size_t i = 0; i < grid->size(); ++i) {
            const double u = (f.grid[i] - center) / sigma;
            f.values[i] = std::exp(-0.25 * u * u);
        }
    } else if (kind == "file") {
        const std::string path = resolve_path(base_dir, require_string(j, "path")).string();
        const CsvTable table = read_csv(path);
        if (table.columns.size() != 3)
            throw io_error("'" + path + "': expected columns omega,amplitude,phase");
        std::vector<double> w;
        std::vector<std::complex<double>> v;
        for (const auto& r : table.rows) {
            w.push_back(r[0]);
            v.push_back(std::polar(r[1], r[2]));
        }
        f.grid = Grid(std::move(w));
        f.values = std::move(v);
    } else {
        throw spec_error("unknown spectrum kind '" + kind + "'");
    }
    std::vector<double> d(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) d[i] = std::norm(f.values[i]);
    const double norm = trapezoid(d, f.grid);
    if (norm <= 0.0) throw parameter_error("spectrum carries no weight on the grid");
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& v : f.values) v *= scale;
    return f;
}

// Shared front half of the wavepacket and detector pipelines: obtain a
// coupling schedule (designed from a target, or read from file) and run it
// forward to the retrodictive amplitude.
struct TriggerBundle {
    CouplingSchedule schedule;
    RetrodictiveAmplitude amplitude;
    std::vector<std::string> warnings;
    bool designed = false;
    std::string target_kind;
    TargetWavepacket target; // only meaningful when designed
};

inline TriggerBundle build_trigger(const Json& cfg, const std::filesystem::path& base_dir,
                                   const RunOptions& opt) {
    TriggerBundle bundle;
    if (cfg.contains("schedule")) {
        const std::string path =
            resolve_path(base_dir, require_string(cfg, "schedule")).string();
        bundle.schedule = schedule_from_csv(path);
        bundle.amplitude = forward_amplitude(bundle.schedule);
        return bundle;
    }
    const Json& tcfg = require_field(cfg, "target");
    bundle.target_kind = require_string(tcfg, "kind");
    Grid window;
    const Grid* window_ptr = nullptr;
    if (cfg.contains("window")) {
        window = grid_from_json(cfg.at("window"), opt.grid_points);
        window_ptr = &window;
    }
    bundle.target = target_from_json(tcfg, window_ptr, base_dir);
    ScheduleDesign design = inverse_design(bundle.target);
    bundle.schedule = std::move(design.schedule);
    bundle.warnings = std::move(design.warnings);
    bundle.amplitude = forward_amplitude(bundle.schedule);
    bundle.designed = true;
    return bundle;
}

// Embed a compactly supported time signal in a wider window of exact zeros.
// Padding refines the spectral grid and pushes the implied time period past
// the physical support, so filter ring-down cannot wrap around; the total
// point count is rounded to a power of two for the fast transform path.
inline TemporalFunction pad_zero(const TemporalFunction& f, double pad_fraction) {
    if (!f.grid.is_uniform()) throw parameter_error("padding requires a uniform grid");
    if (pad_fraction < 0.0) throw parameter_error("padding fraction must be non-negative");
    const std::size_t n = f.size();
    const double dt = f.grid.step();
    std::size_t total = n + 2 * static_cast<std::size_t>(
                                std::ceil(static_cast<double>(n) * pad_fraction));
    std::size_t pow2 = 1;
    while (pow2 < total) pow2 *= 2;
    total = pow2;
    const std::size_t left = (total - n) / 2;
    const double start = f.grid.front() - dt * static_cast<double>(left);
    TemporalFunction out;
    out.grid = Grid::uniform(start, start + dt * static_cast<double>(total - 1), total);
    out.values.assign(total, std::complex<double>{});
    for (std::size_t i = 0; i < n; ++i) out.values[left + i] = f.values[i];
    return out;
}

inline void write_amplitude_csv(const std::filesystem::path& path,
                                const RetrodictiveAmplitude& amp) {
    CsvWriter csv(path.string(), {"t", "re_psi_star", "im_psi_star", "intensity"});
    for (std::size_t i = 0; i < amp.psi_star.size(); ++i) {
        const std::complex<double> v = amp.psi_star.values[i];
        csv.row({amp.psi_star.grid[i], v.real(), v.imag(), std::norm(v)});
    }
}

// L2 distance between the mode the designed schedule actually absorbs,
// conj(psi*) e^{i phase(T)}, and the requested target.
inline double round_trip_residual(const TargetWavepacket& target,
                                  const RetrodictiveAmplitude& amp) {
    const std::size_t n = target.grid.size();
    if (amp.psi_star.size() != n) throw numeric_error("round trip grids differ");
    const std::complex<double> rot = std::polar(1.0, target.phase.back());
    std::vector<double> diff2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> want = std::polar(target.amplitude[i], target.phase[i]);
        diff2[i] = std::norm(std::conj(amp.psi_star.values[i]) * rot - want);
    }
    return std::sqrt(std::max(trapezoid(diff2, target.grid), 0.0));
}

} // namespace detail

// ---- transmit -------------------------------------------------------------

inline void run_transmit(const std::filesystem::path& config_path,
                         const std::filesystem::path& out_dir, const RunOptions& opt = {}) {
    const Json cfg = load_json(config_path);
    const std::filesystem::path base_dir = config_path.parent_path();
    detail::prepare_out(out_dir);

    const NetworkSpec net = detail::network_from_config(cfg, base_dir);
    const Grid grid = grid_from_json(require_field(cfg, "grid"), opt.grid_points);
    const std::string method = string_or(cfg, "method", "auto");
    const TransferResult result = detail::evaluate_network(net, grid, method);
    const SpectralFunction t_fun = result.transmission();

    // Group delay is a best-effort diagnostic: responses with features far
    // narrower than the grid step (weakly coupled supermode combs) cannot be
    // phase-unwrapped sample to sample, and that must not abort the export.
    std::vector<double> tau;
    bool tau_resolved = false;
    if (grid.is_uniform() && grid.size() >= 5) {
        try {
            tau = group_delay(t_fun);
            tau_resolved = true;
        } catch (const numeric_error&) {
            tau.clear();
        }
    }

    std::vector<std::string> cols = {"omega",      "re_t", "im_t",       "re_r",
                                     "im_r",       "t_squared", "group_delay"};
    if (result.has_side_channel()) {
        cols.push_back("re_d");
        cols.push_back("im_d");
    }
    CsvWriter csv((out_dir / "spectrum.csv").string(), cols);
    double defect = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::complex<double> T = result.T[i];
        const std::complex<double> R = result.R[i];
        double total = std::norm(T) + std::norm(R);
        std::vector<double> row = {
            grid[i],       T.real(),     T.imag(), R.real(), R.imag(), std::norm(T),
            tau.empty() ? std::numeric_limits<double>::quiet_NaN() : tau[i]};
        if (result.has_side_channel()) {
            total += std::norm(result.D[i]);
            row.push_back(result.D[i].real());
            row.push_back(result.D[i].imag());
        }
        defect = std::max(defect, std::abs(total - 1.0));
        csv.row(row);
    }

    Json report;
    report["topology"] = to_string(net.topology);
    report["states"] = net.states.size();
    report["grid"] = {{"min", grid.front()}, {"max", grid.back()}, {"points", grid.size()}};
    report["unitarity_max_defect"] = defect;
    report["group_delay_resolved"] = tau_resolved;

    const Json rep_cfg = cfg.contains("report") ? cfg.at("report") : Json::object();
    if (bool_or(rep_cfg, "bandwidth", true)) {
        const BandwidthResult bw = spectral_bandwidth(t_fun);
        report["bandwidth"] = {{"value", bw.value},
                               {"core", bw.core / kPi},
                               {"residual_rel", bw.residual_rel}};
    }
    if (bool_or(rep_cfg, "phase", true)) {
        const PhaseAnalysis pa = analyze_phase(t_fun);
        report["phase"] = {{"winding", pa.accumulated},
                           {"magnitude", std::abs(pa.accumulated)},
                           {"excluded_jumps", pa.excluded_jumps}};
    }
    if (bool_or(rep_cfg, "dispersion", true)) report["dispersion"] = dispersion_metric(t_fun);
    if (bool_or(rep_cfg, "peaks", true)) {
        PeakSearchOptions po;
        po.threshold = number_or(rep_cfg, "peak_threshold", po.threshold);
        const auto peaks = detail::refined_peaks(net, result, method, po);
        Json arr = Json::array();
        for (const TransmissionPeak& p : peaks)
            arr.push_back({{"omega", p.omega}, {"t_squared", p.t_squared}});
        report["peaks"] = arr;
        report["peak_count"] = peaks.size();
    }
    write_json(out_dir / "report.json", report);
}

// ---- wavepacket -----------------------------------------------------------

inline void run_wavepacket(const std::filesystem::path& config_path,
                           const std::filesystem::path& out_dir, const RunOptions& opt = {}) {
    const Json cfg = load_json(config_path);
    const std::filesystem::path base_dir = config_path.parent_path();
    detail::prepare_out(out_dir);

    detail::TriggerBundle bundle = detail::build_trigger(cfg, base_dir, opt);
    write_schedule_csv((out_dir / "schedule.csv").string(), bundle.schedule);
    detail::write_amplitude_csv(out_dir / "amplitude.csv", bundle.amplitude);

    Json report;
    report["weight"] = bundle.amplitude.weight;
    report["detection_time"] = bundle.schedule.detection_time();
    report["mode"] = bundle.designed ? "design" : "forward";
    if (bundle.designed) {
        report["window_mass"] = bundle.target.window_mass();
        report["round_trip_l2"] = detail::round_trip_residual(bundle.target, bundle.amplitude);
        report["warnings"] = bundle.warnings;
        if (bundle.target_kind == "orthogonal-pulse") {
            // Overlap against the plain Gaussian the pulse was built to avoid.
            const Json& tcfg = cfg.at("target");
            const TargetWavepacket base = gaussian_target(require_number(tcfg, "sigma"),
                                                          require_number(tcfg, "center"), 0.0,
                                                          bundle.target.grid);
            std::vector<std::complex<double>> prod(base.grid.size());
            for (std::size_t i = 0; i < base.grid.size(); ++i)
                prod[i] = base.amplitude[i] *
                          std::polar(bundle.target.amplitude[i],
                                     bundle.target.phase[i] - base.phase[i]);
            report["base_overlap"] = std::abs(trapezoid(prod, base.grid));
        }
    }
    write_json(out_dir / "report.json", report);
}

// ---- amplify ----------------------------------------------------------------

inline void run_amplify(const std::filesystem::path& config_path,
                        const std::filesystem::path& out_dir, const RunOptions& opt = {}) {
    const Json cfg = load_json(config_path);
    detail::prepare_out(out_dir);

    std::vector<AmplifierScheme> schemes;
    if (cfg.contains("schemes")) {
        for (const Json& s : cfg.at("schemes")) {
            if (!s.is_string()) throw spec_error("'schemes' must be an array of names");
            schemes.push_back(scheme_from_string(s.get<std::string>()));
        }
        if (schemes.empty()) throw spec_error("'schemes' must not be empty");
    } else {
        schemes = {AmplifierScheme::phase_insensitive, AmplifierScheme::phase_sensitive,
                   AmplifierScheme::single_mode,       AmplifierScheme::multimode,
                   AmplifierScheme::multi_step_single_mode,
                   AmplifierScheme::multi_step_multi_mode};
    }

    std::vector<double> gains;
    const Json& gcfg = require_field(cfg, "gain");
    if (gcfg.contains("values")) {
        gains = number_array(gcfg.at("values"), "'gain.values'");
    } else {
        const double lo = require_number(gcfg, "min");
        const double hi = require_number(gcfg, "max");
        const double factor = number_or(gcfg, "factor", 2.0);
        if (factor <= 1.0) throw spec_error("gain sweep factor must exceed one");
        for (double g = lo; g <= hi * (1.0 + 1e-12); g *= factor) gains.push_back(g);
    }
    if (gains.empty()) throw spec_error("gain sweep is empty");

    AmplifierInput base_in;
    base_in.step_gain = number_or(cfg, "step_gain", 2.0);
    if (cfg.contains("signal")) {
        const Json& s = cfg.at("signal");
        base_in.signal_mean = number_or(s, "mean", 1.0);
        base_in.signal_variance = number_or(s, "variance", 0.0);
    }
    if (cfg.contains("noise")) {
        const Json& s = cfg.at("noise");
        if (s.contains("occupation")) {
            const double nb = require_number(s, "occupation");
            base_in.noise_mean = nb;
            base_in.noise_variance = thermal_variance(nb);
        } else {
            base_in.noise_mean = number_or(s, "mean", 0.0);
            base_in.noise_variance = number_or(s, "variance", 0.0);
        }
    }

    std::vector<AmplifierScheme> mc_schemes;
    std::size_t mc_samples = 0;
    if (cfg.contains("monte_carlo")) {
        const Json& mc = cfg.at("monte_carlo");
        mc_samples = static_cast<std::size_t>(integer_or(mc, "samples", 100000));
        if (mc.contains("schemes")) {
            for (const Json& s : mc.at("schemes"))
                mc_schemes.push_back(scheme_from_string(s.get<std::string>()));
        } else {
            mc_schemes = {AmplifierScheme::single_mode, AmplifierScheme::multimode};
        }
    }

    const auto slug = [](AmplifierScheme s) {
        std::string name = to_string(s);
        std::replace(name.begin(), name.end(), '-', '_');
        return name;
    };

    std::vector<std::string> cols = {"gain"};
    for (AmplifierScheme s : schemes) {
        cols.push_back(slug(s) + "_variance");
        cols.push_back(slug(s) + "_snr");
        cols.push_back(slug(s) + "_bound");
    }
    for (AmplifierScheme s : mc_schemes) {
        cols.push_back(slug(s) + "_mc_variance");
        cols.push_back(slug(s) + "_mc_stderr");
    }

    CsvWriter csv((out_dir / "sweep.csv").string(), cols);
    for (std::size_t gi = 0; gi < gains.size(); ++gi) {
        AmplifierInput in = base_in;
        in.gain = gains[gi];
        std::vector<double> row = {in.gain};
        for (AmplifierScheme s : schemes) {
            in.validate(s);
            row.push_back(output_variance(s, in));
            row.push_back(signal_to_noise(s, in));
            row.push_back(snr_bound(s, in));
        }
        for (std::size_t si = 0; si < mc_schemes.size(); ++si) {
            const std::uint64_t sub_seed =
                opt.seed + 1315423911ULL * (gi + 1) + 2654435761ULL * (si + 1);
            const MonteCarloResult mc =
                monte_carlo_readout(mc_schemes[si], in, mc_samples, sub_seed);
            row.push_back(mc.variance);
            row.push_back(mc.variance_stderr);
        }
        csv.row(row);
    }

    Json report;
    report["gains"] = gains;
    Json names = Json::array();
    for (AmplifierScheme s : schemes) names.push_back(to_string(s));
    report["schemes"] = names;
    report["signal"] = {{"mean", base_in.signal_mean}, {"variance", base_in.signal_variance}};
    report["noise"] = {{"mean", base_in.noise_mean}, {"variance", base_in.noise_variance}};
    report["step_gain"] = base_in.step_gain;
    if (!mc_schemes.empty()) {
        Json mc_names = Json::array();
        for (AmplifierScheme s : mc_schemes) mc_names.push_back(to_string(s));
        report["monte_carlo"] = {{"samples", mc_samples}, {"schemes", mc_names}};
        report["seed"] = opt.seed;
    }
    write_json(out_dir / "report.json", report);
}

// ---- povm -------------------------------------------------------------------

inline void run_povm(const std::filesystem::path& config_path,
                     const std::filesystem::path& out_dir, const RunOptions& opt = {}) {
    const Json cfg = load_json(config_path);
    const std::filesystem::path base_dir = config_path.parent_path();
    detail::prepare_out(out_dir);

    // Trigger wavepacket and its retrodictive projection.
    detail::TriggerBundle bundle = detail::build_trigger(cfg, base_dir, opt);
    const double detection_time = bundle.schedule.detection_time();
    RetrodictiveAmplitude padded = bundle.amplitude;
    padded.psi_star = detail::pad_zero(padded.psi_star, number_or(cfg, "padding", 1.0));
    const SpectralFunction trigger = trigger_spectrum(padded);

    // Network filtering on the trigger's spectral grid.
    const NetworkSpec net = detail::network_from_config(cfg, base_dir);
    const std::string method = string_or(cfg, "method", "auto");
    const TransferResult filter = detail::evaluate_network(net, trigger.grid, method);

    // Detector scalars.
    const Json& dcfg = require_field(cfg, "detector");
    const double eta = number_or(dcfg, "eta", 1.0);
    const long long gain = integer_or(dcfg, "gain", 1);
    const ClickSet clicks = clicks_from_json(dcfg);
    const double kT = number_or(dcfg, "kT", 0.0);
    const double kT_prime = number_or(dcfg, "kT_prime", 0.0);
    double n_bar_readout = 0.0;
    if (kT > 0.0) n_bar_readout = thermal_occupation(require_number(dcfg, "omega_prime"), kT);
    double omega_trigger = number_or(dcfg, "omega_trigger", 0.0);
    double n_bar_trigger = 0.0;
    if (kT_prime > 0.0) {
        if (!dcfg.contains("omega_trigger")) {
            const auto [centroid, sigma] = detail::density_moments(trigger);
            (void)sigma;
            omega_trigger = centroid;
        }
        if (omega_trigger <= 0.0)
            throw parameter_error(
                "trigger mode frequency is not positive; set an explicit omega_trigger to "
                "evaluate its thermal occupation");
        n_bar_trigger = thermal_occupation(omega_trigger, kT_prime);
    }

    AssembleOptions aopt;
    if (cfg.contains("assemble")) {
        const Json& acfg = cfg.at("assemble");
        aopt.tail_tolerance = number_or(acfg, "tail_tolerance", aopt.tail_tolerance);
        aopt.max_photons = integer_or(acfg, "max_photons", aopt.max_photons);
    }

    const DetectorSpec det =
        make_detector(eta, clicks, gain, n_bar_readout, n_bar_trigger, trigger, filter,
                      bundle.amplitude.weight, detection_time);
    const POVMElement element = assemble_povm(det, aopt);

    // Projected spectral state.
    {
        CsvWriter csv((out_dir / "projected.csv").string(),
                      {"omega", "re_s", "im_s", "density"});
        for (std::size_t i = 0; i < element.state.size(); ++i) {
            const std::complex<double> v = element.state.values[i];
            csv.row({element.state.grid[i], v.real(), v.imag(), std::norm(v)});
        }
    }

    Json report;
    report["w0"] = element.w0;
    report["wT"] = element.wT;
    report["purity"] = povm_purity(element);
    report["weight"] = bundle.amplitude.weight;
    report["detection_time"] = detection_time;
    report["tau"] = det.tau;
    report["rho"] = det.rho;
    report["n_bar_readout"] = n_bar_readout;
    report["n_bar_trigger"] = n_bar_trigger;
    if (!bundle.warnings.empty()) report["warnings"] = bundle.warnings;

    // Time-frequency localization of the projected state.
    {
        const Json ecfg = cfg.contains("entropic") ? cfg.at("entropic") : Json::object();
        const auto [w_mean, w_sigma] = detail::density_moments(element.state);
        (void)w_mean;
        double bin_omega = number_or(ecfg, "bin_omega", 0.0);
        double bin_t = number_or(ecfg, "bin_t", 0.0);
        if (bin_omega <= 0.0)
            bin_omega = std::max(w_sigma / 16.0, element.state.grid.step() * (1.0 + 1e-12));
        if (bin_t <= 0.0) {
            const std::size_t n = element.state.size();
            const double dt = kTwoPi / (element.state.grid.step() * static_cast<double>(n));
            const TemporalFunction g = inverse_fourier_transform(
                element.state, -0.5 * dt * static_cast<double>(n - 1));
            const auto [t_mean, t_sigma] = detail::density_moments(g);
            (void)t_mean;
            bin_t = std::max(t_sigma / 16.0, dt * (1.0 + 1e-12));
        }
        const UncertaintyReport unc = entropic_uncertainty(element.state, bin_t, bin_omega);
        report["delta_t"] = unc.delta_t;
        report["delta_omega"] = unc.delta_omega;
        report["product"] = unc.product;
        report["entropy_t_bits"] = unc.entropy_t_bits;
        report["entropy_omega_bits"] = unc.entropy_omega_bits;
        report["bin_t"] = unc.bin_t;
        report["bin_omega"] = unc.bin_omega;
    }

    if (cfg.contains("fluctuations")) {
        const FluctuationSpec fspec = fluctuations_from_json(cfg.at("fluctuations"));
        const MixedElement mixed = fluctuate_povm(det, fspec, opt.seed, aopt);
        Json block;
        block["w0"] = mixed.w0;
        block["wT"] = mixed.wT;
        block["purity"] = mixed.purity;
        block["valid_samples"] = mixed.valid_samples;
        block["skipped_samples"] = mixed.skipped_samples;
        Json weights = Json::array();
        const std::size_t top = std::min<std::size_t>(mixed.weights.size(), 8);
        for (std::size_t i = 0; i < top; ++i) weights.push_back(mixed.weights[i]);
        block["weights"] = weights;
        report["fluctuations"] = block;
    }

    if (cfg.contains("super_resolution")) {
        const Json& scfg = cfg.at("super_resolution");
        const SuperResolutionResult sr = super_resolution_estimate(
            require_number(scfg, "epsilon"), require_number(scfg, "eta"),
            static_cast<std::size_t>(integer_or(scfg, "trials", 1000000)), opt.seed);
        report["super_resolution"] = {
            {"epsilon_hat", sr.epsilon_hat}, {"stderr", sr.stderr_est}, {"n1", sr.n1},
            {"n2", sr.n2},                   {"p1", sr.p1},             {"p2", sr.p2},
            {"trials", sr.trials}};
    }

    if (cfg.contains("toy")) {
        const Json& tcfg = cfg.at("toy");
        const double tau_int =
            number_or(tcfg, "tau_int", std::numeric_limits<double>::infinity());
        const double probe_sigma = number_or(tcfg, "probe_sigma", 0.0);
        const std::vector<double> weights =
            toy_povm_weights(filter.transmission(), tau_int, probe_sigma);
        CsvWriter csv((out_dir / "toy.csv").string(), {"omega", "weight"});
        for (std::size_t i = 0; i < weights.size(); ++i)
            csv.row({filter.grid[i], weights[i]});
    }

    write_json(out_dir / "report.json", report);
}

// ---- design -----------------------------------------------------------------

inline void run_design(const std::filesystem::path& config_path,
                       const std::filesystem::path& out_dir, const RunOptions& opt = {}) {
    const Json cfg = load_json(config_path);
    const std::filesystem::path base_dir = config_path.parent_path();
    detail::prepare_out(out_dir);

    const std::string task = require_string(cfg, "task");
    Json report;
    report["task"] = task;

    if (task == "two-state-series") {
        const double omega1 = require_number(cfg, "omega1");
        const double omega2 = require_number(cfg, "omega2");
        const double gamma = require_number(cfg, "gamma");
        const double Gamma = require_number(cfg, "Gamma");
        const TwoStateDesign design = design_two_state_series(omega1, omega2, gamma, Gamma);
        const double span = std::max({std::abs(omega1), std::abs(omega2), gamma, Gamma, 1.0});
        const Grid probe =
            Grid::uniform(design.omega_star - 1e-6 * span, design.omega_star + 1e-6 * span, 3);
        const TransferResult check =
            transfer_series({omega1, omega2}, gamma, Gamma, {design.g12}, probe);
        report["omega_star"] = design.omega_star;
        report["g12"] = design.g12;
        report["t_squared_at_star"] = std::norm(check.T[1]);
    } else if (task == "mode-matched") {
        const NetworkSpec net = detail::network_from_config(cfg, base_dir);
        const Grid grid = grid_from_json(require_field(cfg, "grid"), opt.grid_points);
        const TransferResult filter =
            detail::evaluate_network(net, grid, string_or(cfg, "method", "auto"));
        const SpectralFunction target =
            detail::spectrum_from_json(require_field(cfg, "spectrum"), &grid, base_dir);
        const double detection_time = number_or(cfg, "detection_time", 0.0);

        DesignOptions dopt;
        dopt.magnitude_floor = number_or(cfg, "magnitude_floor", dopt.magnitude_floor);
        const SpectralFunction designed =
            mode_matched_design(target, filter, detection_time, dopt);

        // Detection check: filter the designed trigger, stamp the click time,
        // and overlap the projected state against the requested spectrum.
        const ModeOverlap overlap = mode_overlap(designed, filter);
        SpectralFunction projected = overlap.transmitted;
        for (std::size_t i = 0; i < projected.size(); ++i)
            projected.values[i] = std::conj(projected.values[i]) *
                                  std::polar(1.0, projected.grid[i] * detection_time);
        const double ratio = std::norm(detail::overlap_integral(projected, target));

        CsvWriter csv((out_dir / "designed.csv").string(),
                      {"omega", "re_psi", "im_psi", "density"});
        for (std::size_t i = 0; i < designed.size(); ++i) {
            const std::complex<double> v = designed.values[i];
            csv.row({designed.grid[i], v.real(), v.imag(), std::norm(v)});
        }
        report["tau"] = overlap.tau;
        report["rho"] = overlap.rho;
        report["overlap_ratio"] = ratio;
        report["detection_time"] = detection_time;
    } else if (task == "perfect-transmission") {
        const NetworkSpec net = detail::network_from_config(cfg, base_dir);
        const Grid grid = grid_from_json(require_field(cfg, "grid"), opt.grid_points);
        const std::string method = string_or(cfg, "method", "auto");
        const TransferResult result = detail::evaluate_network(net, grid, method);
        PeakSearchOptions popt;
        popt.threshold = number_or(cfg, "threshold", popt.threshold);
        const auto peaks = detail::refined_peaks(net, result, method, popt);
        Json arr = Json::array();
        for (const TransmissionPeak& p : peaks)
            arr.push_back({{"omega", p.omega}, {"t_squared", p.t_squared}});
        report["peaks"] = arr;
        report["peak_count"] = peaks.size();
    } else {
        throw spec_error("unknown design task '" + task + "'");
    }
    write_json(out_dir / "report.json", report);
}

} // namespace pdk
