#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pdk/core/constants.hpp"
#include "pdk/core/errors.hpp"
#include "pdk/core/parallel.hpp"
#include "pdk/core/sampled.hpp"
#include "pdk/network/continued_fraction.hpp"
#include "pdk/network/types.hpp"

namespace pdk {

// Frequency response of a network: transmission T, reflection R and (when a
// side channel is present) the monitor amplitude D, all on a common grid.
//
// Sign conventions: a pure propagation delay t0 appears as exp(-i w t0); the
// single-state transmission is T = sqrt(gamma_in*gamma_out) / (a + i(w - w0))
// with a = (gamma_in + gamma_out + mu)/2, whose group delay -d(arg T)/dw is
// positive.
//
// Flux conservation |T|^2 + |R|^2 + |D|^2 = 1 holds pointwise.  The identity
// conj(R) T + R conj(T) = 0 additionally requires balanced decays
// (gamma_in = gamma_out for every state); for unbalanced networks the two
// continua see different reflection responses and the identity genuinely
// fails for the (R, T) pair exposed here.
struct TransferResult {
    Grid grid;
    std::vector<Complex> T;
    std::vector<Complex> R;
    std::vector<Complex> D; // empty when the network has no side channel

    bool has_side_channel() const { return !D.empty(); }

    SpectralFunction transmission() const { return SpectralFunction(grid, T); }
    SpectralFunction reflection() const { return SpectralFunction(grid, R); }
    SpectralFunction side() const {
        if (D.empty()) throw parameter_error("network has no side channel");
        return SpectralFunction(grid, D);
    }
};

namespace detail {

// Keep closed-form pole terms finite when the grid hits a bare resonance.
inline double safe_detuning(double w, double w0) {
    const double d = w - w0;
    const double tiny = 1e-13 * (1.0 + std::abs(w) + std::abs(w0));
    if (std::abs(d) < tiny) return d < 0.0 ? -tiny : tiny;
    return d;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Single state between two continua (optionally with a side channel).
//   T = sqrt(gamma Gamma) / (a + i (w - w0)),  a = (gamma + Gamma)/2
//   R = ((Gamma - gamma)/2 + i (w - w0)) / (a + i (w - w0))
// ---------------------------------------------------------------------------
inline TransferResult transfer_simple(double gamma, double Gamma, double omega0,
                                      const Grid& grid) {
    if (gamma < 0.0 || Gamma < 0.0)
        throw parameter_error("decay rates must be non-negative");
    if (gamma + Gamma <= 0.0)
        throw parameter_error("at least one decay rate must be positive");
    TransferResult out;
    out.grid = grid;
    out.T.resize(grid.size());
    out.R.resize(grid.size());
    const double a = 0.5 * (gamma + Gamma);
    const double num_t = std::sqrt(gamma * Gamma);
    const double num_r = 0.5 * (Gamma - gamma);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Complex den(a, grid[i] - omega0);
        out.T[i] = num_t / den;
        out.R[i] = Complex(num_r, grid[i] - omega0) / den;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parallel (uncoupled) states, every state decaying with the same ratio
// gamma_out = k * gamma_in:
//   h(w) = sum_i gamma_i / (2 (w - w_i))
//   R = 1 - 2 h / ((1 + k) h + i),   T = sqrt(k) (1 - R)
// ---------------------------------------------------------------------------
inline TransferResult transfer_parallel_unbalanced(const std::vector<ResonantMode>& modes,
                                                   double k, const Grid& grid) {
    if (modes.empty()) throw spec_error("network has no discrete states");
    if (k <= 0.0) throw parameter_error("decay ratio k must be positive");
    for (const auto& m : modes)
        if (m.gamma <= 0.0) throw parameter_error("mode rates must be positive");
    TransferResult out;
    out.grid = grid;
    out.T.resize(grid.size());
    out.R.resize(grid.size());
    const double sqrt_k = std::sqrt(k);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        double h = 0.0;
        for (const auto& m : modes)
            h += m.gamma / (2.0 * detail::safe_detuning(grid[p], m.omega));
        const Complex R = 1.0 - 2.0 * h / Complex((1.0 + k) * h, 1.0);
        out.R[p] = R;
        out.T[p] = sqrt_k * (1.0 - R);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parallel states with identical rates gamma (input) and Gamma (output):
//   f(w) = sum_i 1 / (w - w_i)
//   R = 1 - gamma f / (((gamma + Gamma)/2) f + i),  T = sqrt(Gamma/gamma)(1 - R)
// ---------------------------------------------------------------------------
inline TransferResult transfer_parallel_homogeneous(const std::vector<double>& omegas,
                                                    double gamma, double Gamma,
                                                    const Grid& grid) {
    if (omegas.empty()) throw spec_error("network has no discrete states");
    if (gamma <= 0.0 || Gamma <= 0.0)
        throw parameter_error("decay rates must be positive");
    TransferResult out;
    out.grid = grid;
    out.T.resize(grid.size());
    out.R.resize(grid.size());
    const double a = 0.5 * (gamma + Gamma);
    const double ratio = std::sqrt(Gamma / gamma);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        double f = 0.0;
        for (const double w0 : omegas)
            f += 1.0 / detail::safe_detuning(grid[p], w0);
        const Complex R = 1.0 - gamma * f / Complex(a * f, 1.0);
        out.R[p] = R;
        out.T[p] = ratio * (1.0 - R);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Linear chain: state 1 decays into the input channel (rate gamma), state N
// into the output channel (rate Gamma), neighbours coupled by g[n].
//
// Evaluated through the continuant form of the Wallis-Euler recursion with
// power-of-two rescaling:  with d(n) = i(w - w_n) + edge half-rates and
// K(a..b) the tridiagonal continuant,
//   R = 1 - gamma K(2..N) / K(1..N)
//   T = sqrt(gamma Gamma) i^(N-1) (prod_n g_n) / K(1..N).
// ---------------------------------------------------------------------------
inline TransferResult transfer_series(const std::vector<double>& omegas, double gamma,
                                      double Gamma, const std::vector<double>& couplings,
                                      const Grid& grid) {
    const std::size_t n = omegas.size();
    if (n == 0) throw spec_error("network has no discrete states");
    if (couplings.size() + 1 != n)
        throw spec_error("series chain of N states needs N-1 couplings");
    if (gamma <= 0.0 || Gamma <= 0.0)
        throw parameter_error("edge decay rates must be positive");

    TransferResult out;
    out.grid = grid;
    out.T.resize(grid.size());
    out.R.resize(grid.size());

    // i^(N-1) * prod g, with overflow-safe exponent tracking.
    ScaledComplex chain_num;
    chain_num.v = std::sqrt(gamma * Gamma);
    for (const double g : couplings) {
        chain_num.v *= Complex(0.0, 1.0) * g;
        chain_num.normalize();
    }

    std::vector<Complex> d(n);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double w = grid[p];
        for (std::size_t s = 0; s < n; ++s) {
            double re = 0.0;
            if (s == 0) re += 0.5 * gamma;
            if (s + 1 == n) re += 0.5 * Gamma;
            d[s] = Complex(re, w - omegas[s]);
        }
        const ScaledComplex det = continuant(d, couplings, 0, n - 1);
        const ScaledComplex sub = continuant(d, couplings, 1, n - 1);
        out.R[p] = 1.0 - gamma * scaled_ratio(sub, det);
        out.T[p] = scaled_ratio(chain_num, det);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hybrid: a chain of parallel manifolds.
// ---------------------------------------------------------------------------

// Uniformly-unbalanced mode: manifold m holds gauge modes (w_i, gamma_i) and a
// ratio k_m.  Physically, manifold 1 decays into the input channel with
// gamma_i, manifold M into the output channel with k_M * gamma_i, and states
// i in manifold m / j in manifold m+1 couple with g = sqrt(k_m gamma_i gamma_j)/2.
struct HybridUnbalanced {
    struct Manifold {
        std::vector<ResonantMode> modes;
        double k = 1.0;
    };
    std::vector<Manifold> manifolds;
};

// Homogeneous mode: every mode of manifold 1 decays with gamma, every mode of
// manifold M with Gamma, and all cross-manifold pairs (m, m+1) couple with the
// same rate couplings[m].
struct HybridHomogeneous {
    std::vector<std::vector<double>> manifold_omegas;
    double gamma = 0.0;
    double Gamma = 0.0;
    std::vector<double> couplings;
};

inline TransferResult transfer_hybrid(const HybridUnbalanced& hy, const Grid& grid) {
    const std::size_t M = hy.manifolds.size();
    if (M == 0) throw spec_error("hybrid network has no manifolds");
    for (const auto& m : hy.manifolds) {
        if (m.modes.empty()) throw spec_error("hybrid manifold is empty");
        if (m.k <= 0.0) throw parameter_error("manifold ratio k must be positive");
        for (const auto& s : m.modes)
            if (s.gamma <= 0.0) throw parameter_error("mode rates must be positive");
    }
    if (M == 1)
        return transfer_parallel_unbalanced(hy.manifolds[0].modes, hy.manifolds[0].k, grid);

    TransferResult out;
    out.grid = grid;
    out.T.resize(grid.size());
    out.R.resize(grid.size());

    std::vector<double> h(M);
    std::vector<Complex> sigma(M); // sigma[m] maps manifold amplitude m-1 -> m
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double w = grid[p];
        for (std::size_t m = 0; m < M; ++m) {
            double acc = 0.0;
            for (const auto& s : hy.manifolds[m].modes)
                acc += s.gamma / (2.0 * detail::safe_detuning(w, s.omega));
            h[m] = acc;
        }
        const double k_last = hy.manifolds[M - 1].k;
        sigma[M - 1] = std::sqrt(hy.manifolds[M - 2].k) * h[M - 1] /
                       Complex(1.0, -k_last * h[M - 1]);
        for (std::size_t m = M - 2; m >= 1; --m)
            sigma[m] = std::sqrt(hy.manifolds[m - 1].k) * h[m] /
                       (1.0 - std::sqrt(hy.manifolds[m].k) * h[m] * sigma[m + 1]);
        const Complex A1 = Complex(0.0, 2.0 * h[0]) /
                           (Complex(1.0, -h[0]) - std::sqrt(hy.manifolds[0].k) * h[0] * sigma[1]);
        Complex A_last = A1;
        for (std::size_t m = 1; m < M; ++m) A_last *= sigma[m];
        out.R[p] = 1.0 + A1;
        out.T[p] = -std::sqrt(k_last) * A_last;
    }
    return out;
}

inline TransferResult transfer_hybrid(const HybridHomogeneous& hy, const Grid& grid) {
    const std::size_t M = hy.manifold_omegas.size();
    if (M == 0) throw spec_error("hybrid network has no manifolds");
    for (const auto& m : hy.manifold_omegas)
        if (m.empty()) throw spec_error("hybrid manifold is empty");
    if (hy.gamma <= 0.0 || hy.Gamma <= 0.0)
        throw parameter_error("decay rates must be positive");
    if (M == 1)
        return transfer_parallel_homogeneous(hy.manifold_omegas[0], hy.gamma, hy.Gamma, grid);
    if (hy.couplings.size() + 1 != M)
        throw spec_error("hybrid chain of M manifolds needs M-1 couplings");

    TransferResult out;
    out.grid = grid;
    out.T.resize(grid.size());
    out.R.resize(grid.size());

    std::vector<double> f(M);
    std::vector<Complex> rho(M); // rho[m] maps manifold sum m-1 -> m
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double w = grid[p];
        for (std::size_t m = 0; m < M; ++m) {
            double acc = 0.0;
            for (const double w0 : hy.manifold_omegas[m])
                acc += 1.0 / detail::safe_detuning(w, w0);
            f[m] = acc;
        }
        rho[M - 1] = f[M - 1] * hy.couplings[M - 2] /
                     Complex(1.0, -0.5 * hy.Gamma * f[M - 1]);
        for (std::size_t m = M - 2; m >= 1; --m)
            rho[m] = f[m] * hy.couplings[m - 1] /
                     (1.0 - f[m] * hy.couplings[m] * rho[m + 1]);
        const Complex B1 = Complex(0.0, std::sqrt(hy.gamma) * f[0]) /
                           (Complex(1.0, -0.5 * hy.gamma * f[0]) -
                            f[0] * hy.couplings[0] * rho[1]);
        Complex B_last = B1;
        for (std::size_t m = 1; m < M; ++m) B_last *= rho[m];
        out.R[p] = 1.0 + std::sqrt(hy.gamma) * B1;
        out.T[p] = -std::sqrt(hy.Gamma) * B_last;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Direct solution of the full microscopic model for an arbitrary topology.
//
// Per frequency solve  [V - i g + i (w - w_s) I] c = -sqrt(gamma_in) a_in
// with V_sr = (sqrt(gin_s gin_r) + sqrt(gout_s gout_r) + sqrt(mu_s mu_r)) / 2,
// then  R = 1 + sum sqrt(gin_s) c_s,  T = -sum sqrt(gout_s) c_s,
//       D = -sum sqrt(mu_s) c_s.
// ---------------------------------------------------------------------------
inline TransferResult transfer_direct(const NetworkSpec& net, const Grid& grid) {
    net.validate();
    const std::size_t n = net.states.size();

    Eigen::MatrixXcd base = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t r = 0; r < n; ++r) {
            const auto& a = net.states[s];
            const auto& b = net.states[r];
            base(s, r) = 0.5 * (std::sqrt(a.gamma_in * b.gamma_in) +
                                std::sqrt(a.gamma_out * b.gamma_out) +
                                std::sqrt(a.mu * b.mu));
        }
    }
    for (const auto& c : net.couplings) {
        base(c.i, c.j) += Complex(0.0, -c.g);
        base(c.j, c.i) += Complex(0.0, -c.g);
    }

    Eigen::VectorXcd rhs(n);
    for (std::size_t s = 0; s < n; ++s) rhs(s) = -std::sqrt(net.states[s].gamma_in);

    const bool side = net.has_side_channel();
    TransferResult out;
    out.grid = grid;
    out.T.resize(grid.size());
    out.R.resize(grid.size());
    if (side) out.D.resize(grid.size());

    parallel_for(grid.size(), [&](std::size_t p) {
        Eigen::MatrixXcd m = base;
        for (std::size_t s = 0; s < n; ++s)
            m(s, s) += Complex(0.0, grid[p] - net.states[s].omega);
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
        if (!lu.isInvertible())
            throw numeric_error("network response is singular at frequency " +
                                std::to_string(grid[p]));
        const Eigen::VectorXcd c = lu.solve(rhs);
        Complex R(1.0, 0.0), T(0.0, 0.0), Dm(0.0, 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            R += std::sqrt(net.states[s].gamma_in) * c(s);
            T -= std::sqrt(net.states[s].gamma_out) * c(s);
            Dm -= std::sqrt(net.states[s].mu) * c(s);
        }
        out.R[p] = R;
        out.T[p] = T;
        if (side) out.D[p] = Dm;
    });
    return out;
}

// Evaluate the direct model at a single frequency (used by peak refinement).
inline Complex transfer_direct_at(const NetworkSpec& net, double w) {
    const double eps = 1.0 + std::abs(w);
    std::vector<double> pts{w - 1e-9 * eps, w, w + 1e-9 * eps};
    const TransferResult r = transfer_direct(net, Grid(std::move(pts)));
    return r.T[1];
}

// ---------------------------------------------------------------------------
// Builders that express the closed-form arrangements as full network
// descriptions (used for cross-validation and by the file format).
// ---------------------------------------------------------------------------

inline NetworkSpec to_network(const std::vector<ResonantMode>& modes, double k) {
    NetworkSpec net;
    net.topology = Topology::parallel;
    for (const auto& m : modes)
        net.states.push_back({m.omega, m.gamma, k * m.gamma, 0.0});
    return net;
}

inline NetworkSpec to_network(const std::vector<double>& omegas, double gamma, double Gamma) {
    NetworkSpec net;
    net.topology = Topology::parallel;
    for (const double w : omegas) net.states.push_back({w, gamma, Gamma, 0.0});
    return net;
}

inline NetworkSpec to_network_series(const std::vector<double>& omegas, double gamma,
                                     double Gamma, const std::vector<double>& couplings) {
    NetworkSpec net;
    net.topology = Topology::series;
    for (std::size_t s = 0; s < omegas.size(); ++s) {
        DiscreteState st;
        st.omega = omegas[s];
        st.gamma_in = (s == 0) ? gamma : 0.0;
        st.gamma_out = (s + 1 == omegas.size()) ? Gamma : 0.0;
        net.states.push_back(st);
    }
    for (std::size_t s = 0; s + 1 < omegas.size(); ++s)
        net.couplings.push_back({s, s + 1, couplings[s]});
    return net;
}

inline NetworkSpec to_network(const HybridUnbalanced& hy) {
    NetworkSpec net;
    net.topology = Topology::hybrid;
    const std::size_t M = hy.manifolds.size();
    std::size_t base = 0;
    std::vector<std::size_t> offsets(M);
    for (std::size_t m = 0; m < M; ++m) {
        offsets[m] = base;
        net.manifolds.emplace_back();
        for (const auto& s : hy.manifolds[m].modes) {
            DiscreteState st;
            st.omega = s.omega;
            st.gamma_in = (m == 0) ? s.gamma : 0.0;
            st.gamma_out = (m + 1 == M) ? hy.manifolds[m].k * s.gamma : 0.0;
            if (M == 1) {
                st.gamma_in = s.gamma;
                st.gamma_out = hy.manifolds[m].k * s.gamma;
            }
            net.manifolds.back().push_back(net.states.size());
            net.states.push_back(st);
        }
        base += hy.manifolds[m].modes.size();
    }
    for (std::size_t m = 0; m + 1 < M; ++m) {
        for (std::size_t i = 0; i < hy.manifolds[m].modes.size(); ++i) {
            for (std::size_t j = 0; j < hy.manifolds[m + 1].modes.size(); ++j) {
                const double g = 0.5 * std::sqrt(hy.manifolds[m].k *
                                                 hy.manifolds[m].modes[i].gamma *
                                                 hy.manifolds[m + 1].modes[j].gamma);
                net.couplings.push_back({offsets[m] + i, offsets[m + 1] + j, g});
            }
        }
    }
    return net;
}

inline NetworkSpec to_network(const HybridHomogeneous& hy) {
    NetworkSpec net;
    net.topology = Topology::hybrid;
    const std::size_t M = hy.manifold_omegas.size();
    std::vector<std::size_t> offsets(M);
    std::size_t base = 0;
    for (std::size_t m = 0; m < M; ++m) {
        offsets[m] = base;
        net.manifolds.emplace_back();
        for (const double w : hy.manifold_omegas[m]) {
            DiscreteState st;
            st.omega = w;
            st.gamma_in = (m == 0) ? hy.gamma : 0.0;
            st.gamma_out = (m + 1 == M) ? hy.Gamma : 0.0;
            if (M == 1) {
                st.gamma_in = hy.gamma;
                st.gamma_out = hy.Gamma;
            }
            net.manifolds.back().push_back(net.states.size());
            net.states.push_back(st);
        }
        base += hy.manifold_omegas[m].size();
    }
    for (std::size_t m = 0; m + 1 < M; ++m)
        for (std::size_t i = 0; i < hy.manifold_omegas[m].size(); ++i)
            for (std::size_t j = 0; j < hy.manifold_omegas[m + 1].size(); ++j)
                net.couplings.push_back({offsets[m] + i, offsets[m + 1] + j, hy.couplings[m]});
    return net;
}

} // namespace pdk
