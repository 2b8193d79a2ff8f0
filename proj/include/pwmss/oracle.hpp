#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pwmss/errors.hpp"
#include "pwmss/load_circuit.hpp"
#include "pwmss/piecewise_solution.hpp"
#include "pwmss/pwm_train.hpp"

namespace pwmss {

/// Settings for the fixed-step RK4 steady-state oracle.  Deliberately shares
/// no code with the closed-form path: no characteristic roots, no analytic
/// decay estimates, just time stepping until two consecutive periods agree.
struct OracleConfig {
    int steps_per_period = 1 << 16;
    int max_periods = 400;
    double settle_tol = 1e-10; // relative period-to-period deviation
};

inline void validate(const OracleConfig& cfg) {
    if (cfg.steps_per_period < (1 << 10))
        throw InvalidParameter("oracle needs at least 2^10 steps per period");
    if (cfg.max_periods < 1) throw InvalidParameter("max_periods must be positive");
    if (!(cfg.settle_tol > 0.0)) throw InvalidParameter("settle_tol must be positive");
}

/// One steady-state period sampled at every integration step boundary.
struct Trajectory {
    LoadKind kind = LoadKind::lr;
    double period = 0.0;
    std::vector<double> times; // step edges in [0, T]
    std::vector<StateVector> states;
    int periods_used = 0;
};

namespace detail {

// Step edges over one period: the uniform grid plus every v_s discontinuity
// (switching instants and their half-wave mirror images), so no RK4 step
// straddles a jump of the source voltage.
inline std::vector<double> period_step_edges(const PwmTrain& train, int steps_per_period) {
    const double period = train.period();
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(steps_per_period) + 2 * train.instants().size() + 4);
    for (int i = 0; i <= steps_per_period; ++i)
        edges.push_back(period * i / steps_per_period);
    edges.push_back(period / 2.0);
    for (double t : train.instants()) {
        edges.push_back(t);
        edges.push_back(t + period / 2.0);
    }
    std::sort(edges.begin(), edges.end());
    std::vector<double> unique_edges;
    unique_edges.reserve(edges.size());
    const double tol = 1e-15 * period;
    for (double e : edges) {
        if (unique_edges.empty() || e - unique_edges.back() > tol) unique_edges.push_back(e);
    }
    unique_edges.back() = period;
    return unique_edges;
}

template <int Dim, typename Deriv>
inline void rk4_period(const std::vector<double>& widths, const std::vector<double>& vs_mid,
                       Deriv&& deriv, std::array<double, Dim>& x,
                       std::vector<std::array<double, Dim>>& samples) {
    samples[0] = x;
    std::array<double, Dim> k1, k2, k3, k4, probe;
    for (std::size_t e = 0; e < widths.size(); ++e) {
        const double h = widths[e];
        const double u = vs_mid[e];
        deriv(x.data(), u, k1.data());
        for (int d = 0; d < Dim; ++d) probe[d] = x[d] + 0.5 * h * k1[d];
        deriv(probe.data(), u, k2.data());
        for (int d = 0; d < Dim; ++d) probe[d] = x[d] + 0.5 * h * k2[d];
        deriv(probe.data(), u, k3.data());
        for (int d = 0; d < Dim; ++d) probe[d] = x[d] + h * k3[d];
        deriv(probe.data(), u, k4.data());
        for (int d = 0; d < Dim; ++d)
            x[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        samples[e + 1] = x;
    }
}

template <int Dim, typename Deriv>
inline Trajectory settle(const PwmTrain& train, const OracleConfig& cfg, LoadKind kind,
                         Deriv&& deriv) {
    const std::vector<double> edges = period_step_edges(train, cfg.steps_per_period);
    const std::size_t steps = edges.size() - 1;
    std::vector<double> widths(steps), vs_mid(steps);
    for (std::size_t e = 0; e < steps; ++e) {
        widths[e] = edges[e + 1] - edges[e];
        vs_mid[e] = vs_at(train, (edges[e] + edges[e + 1]) / 2.0);
    }

    std::array<double, Dim> x{};
    std::vector<std::array<double, Dim>> current(edges.size()), previous(edges.size());
    int period_index = 0;
    bool settled = false;
    for (; period_index < cfg.max_periods; ++period_index) {
        rk4_period<Dim>(widths, vs_mid, deriv, x, current);
        if (period_index > 0) {
            double peak = 0.0, dev = 0.0;
            for (std::size_t e = 0; e < current.size(); ++e) {
                for (int d = 0; d < Dim; ++d) {
                    peak = std::max(peak, std::abs(current[e][d]));
                    dev = std::max(dev, std::abs(current[e][d] - previous[e][d]));
                }
            }
            if (dev <= cfg.settle_tol * peak || (peak == 0.0 && dev == 0.0)) {
                settled = true;
                ++period_index;
                break;
            }
        }
        std::swap(current, previous);
    }
    if (!settled)
        throw NotSettled("no periodic steady state after " + std::to_string(cfg.max_periods) +
                         " periods");

    Trajectory traj;
    traj.kind = kind;
    traj.period = train.period();
    traj.times = edges;
    traj.periods_used = period_index;
    traj.states.resize(current.size());
    for (std::size_t e = 0; e < current.size(); ++e) {
        StateVector sv;
        sv.i = current[e][0];
        if constexpr (Dim == 2) sv.vc = current[e][1];
        if constexpr (Dim == 3) {
            sv.i1 = current[e][1];
            sv.vc = current[e][2];
        }
        traj.states[e] = sv;
    }
    return traj;
}

} // namespace detail

/// Integrate the load's state equations from zero initial state until two
/// consecutive periods coincide to settle_tol, returning the final period.
inline Trajectory integrate(const LoadCircuit& load, const PwmTrain& train,
                            const OracleConfig& cfg = {}) {
    validate(load);
    validate(cfg);
    if (const auto* lr = std::get_if<Lr>(&load)) {
        const double r = lr->R, l = lr->L;
        return detail::settle<1>(train, cfg, LoadKind::lr,
                                 [r, l](const double* x, double vs, double* dxdt) {
                                     dxdt[0] = (vs - r * x[0]) / l;
                                 });
    }
    if (const auto* lrc = std::get_if<Lrc>(&load)) {
        const double r = lrc->R, l = lrc->L, c = lrc->C;
        return detail::settle<2>(train, cfg, LoadKind::lrc,
                                 [r, l, c](const double* x, double vs, double* dxdt) {
                                     dxdt[0] = (vs - x[1]) / l;         // L di/dt = v_s - v_C
                                     dxdt[1] = (x[0] - x[1] / r) / c;   // C dv_C/dt = i - v_C/R
                                 });
    }
    const auto& lclr = std::get<Lclr>(load);
    const double r = lclr.R, l = lclr.L, l1 = lclr.L1, c = lclr.C;
    return detail::settle<3>(train, cfg, LoadKind::lclr,
                             [r, l, l1, c](const double* x, double vs, double* dxdt) {
                                 dxdt[0] = (vs - x[2]) / l;        // L di/dt = v_s - v_C
                                 dxdt[1] = (x[2] - r * x[1]) / l1; // L1 di_1/dt = v_C - R i_1
                                 dxdt[2] = (x[0] - x[1]) / c;      // C dv_C/dt = i - i_1
                             });
}

/// Max pointwise deviation of the closed-form waveform from the oracle
/// trajectory, relative to the oracle's peak.
inline double compare(const PiecewiseExpSolution& sol, const Trajectory& traj) {
    if (!has_output(traj.kind, sol.output_kind()))
        throw MismatchedOutputKind(std::string("trajectory does not carry ") +
                                   to_string(sol.output_kind()));
    if (std::abs(sol.period() - traj.period) > 1e-9 * traj.period)
        throw MismatchedOutputKind("solution and trajectory periods differ");

    auto field = [&](const StateVector& sv) {
        switch (sol.output_kind()) {
        case OutputKind::current_i: return sv.i;
        case OutputKind::current_i1: return sv.i1;
        case OutputKind::voltage_vc: return sv.vc;
        }
        return sv.i;
    };
    double peak = 0.0, worst = 0.0;
    for (std::size_t e = 0; e < traj.times.size(); ++e) {
        const double reference = field(traj.states[e]);
        peak = std::max(peak, std::abs(reference));
        worst = std::max(worst, std::abs(sol.value(traj.times[e]) - reference));
    }
    return peak > 0.0 ? worst / peak : worst;
}

} // namespace pwmss
