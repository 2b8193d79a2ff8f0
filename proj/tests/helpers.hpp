#pragma once

// Shared fixtures for the unit and acceptance suites: the published benchmark
// configurations, randomized case generators tuned so the RK4 oracle settles
// quickly, and independent numerical oracles (kink-aligned Simpson Fourier
// integration, long-double bisection cubic roots) that share no code with the
// library paths they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "pwmss/load_circuit.hpp"
#include "pwmss/piecewise_solution.hpp"
#include "pwmss/pwm_train.hpp"
#include "pwmss/roots.hpp"
#include "pwmss/spwm.hpp"

namespace testing_support {

// ---------------------------------------------------------------------------
// Benchmark configurations: V_o = 100 V, f = 60 Hz, N = 11 pulses.
// ---------------------------------------------------------------------------

inline pwmss::Lr bench_lr() { return {1.0, 300e-6}; }
inline pwmss::Lrc bench_lrc() { return {100e-6, 1.0, 50e-6}; }
inline pwmss::Lclr bench_lclr() { return {100e-6, 50e-6, 300e-6, 1.0}; }

inline pwmss::SpwmSpec bench_spwm(double modulation = 0.9) {
    pwmss::SpwmSpec spec;
    spec.pulses_per_half = 11;
    spec.modulation = modulation;
    spec.frequency = 60.0;
    spec.amplitude = 100.0;
    return spec;
}

inline pwmss::PwmTrain bench_train(double modulation = 0.9) {
    return pwmss::generate(bench_spwm(modulation));
}

// (L, C) pairs and published THD percentages of the L-C-LR comparison table,
// at fixed R = 1 ohm, L1 = 300 uH.
inline const std::vector<std::pair<double, double>>& table_lc_pairs() {
    static const std::vector<std::pair<double, double>> pairs = {
        {50e-6, 5e-6}, {40e-6, 12e-6}, {30e-6, 20e-6}, {20e-6, 28e-6}, {10e-6, 35e-6}};
    return pairs;
}
inline const std::vector<double>& table_thd_percent() {
    static const std::vector<double> thd = {1.54, 1.17, 1.03, 1.40, 1.83};
    return thd;
}

// ---------------------------------------------------------------------------
// Randomized cases.  Element values are derived from target root bands so the
// time-stepping oracle settles within its period budget and keeps its own
// truncation error well below the comparison tolerance.
// ---------------------------------------------------------------------------

struct RootBand {
    double min_real = 200.0;   // lower bound on |Re s|, 1/s
    double max_mag = 2.0e4;    // upper bound on |s|, 1/s
};

inline double log_uniform(std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(std::log(lo), std::log(hi));
    return std::exp(dist(rng));
}

inline pwmss::PwmTrain random_train(std::mt19937& rng, double amplitude, double period) {
    std::uniform_int_distribution<int> pulse_dist(1, 15);
    const int pulses = pulse_dist(rng);
    std::uniform_real_distribution<double> t_dist(0.002 * period, 0.498 * period);
    std::vector<double> instants;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        instants.resize(2 * static_cast<std::size_t>(pulses));
        for (double& t : instants) t = t_dist(rng);
        std::sort(instants.begin(), instants.end());
        double min_gap = period;
        for (std::size_t i = 0; i + 1 < instants.size(); ++i)
            min_gap = std::min(min_gap, instants[i + 1] - instants[i]);
        if (min_gap > 1e-6 * period) break;
        instants.clear();
    }
    return pwmss::make_pwm_train(amplitude, period, std::move(instants));
}

inline pwmss::Lr random_lr(std::mt19937& rng, const RootBand& band) {
    const double mag = log_uniform(rng, band.min_real * 1.5, band.max_mag);
    const double resistance = log_uniform(rng, 0.3, 3.0);
    return {resistance, resistance / mag};
}

inline pwmss::Lrc random_lrc(std::mt19937& rng, const RootBand& band) {
    for (;;) {
        const double natural = log_uniform(rng, band.min_real * 2.5, band.max_mag * 0.9);
        double damping = log_uniform(rng, 0.15, 3.0);
        if (damping > 0.95 && damping < 1.05) continue; // near-critical: repeated roots
        if (damping * natural < band.min_real) continue;
        if (damping > 1.0 &&
            natural * (damping + std::sqrt(damping * damping - 1.0)) > band.max_mag)
            continue;
        const double resistance = log_uniform(rng, 0.3, 3.0);
        const double capacitance = 1.0 / (2.0 * damping * natural * resistance);
        const double inductance = 1.0 / (natural * natural * capacitance);
        return {inductance, resistance, capacitance};
    }
}

inline pwmss::Lclr random_lclr(std::mt19937& rng, const RootBand& band) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        pwmss::Lclr load{log_uniform(rng, 3e-5, 1e-3), log_uniform(rng, 1e-5, 1e-3),
                         log_uniform(rng, 1e-4, 1e-3), log_uniform(rng, 0.5, 2.0)};
        try {
            const pwmss::RootSet roots = pwmss::roots_lclr(load);
            if (roots.min_separation() < 1e-5) continue;
            bool in_band = true;
            for (const pwmss::Complex& s : roots.roots()) {
                if (-s.real() < band.min_real || std::abs(s) > band.max_mag) in_band = false;
            }
            if (in_band) return load;
        } catch (const pwmss::RepeatedRoots&) {
        }
    }
    return {100e-6, 50e-6, 300e-6, 1.0}; // unreachable in practice
}

// ---------------------------------------------------------------------------
// Independent sampled Fourier oracle: composite Simpson over one full period
// with subinterval boundaries pinned to every waveform kink, so the quadrature
// keeps its full order on the piecewise-smooth integrand.
// ---------------------------------------------------------------------------

inline std::vector<double> full_period_kinks(const pwmss::PiecewiseExpSolution& sol) {
    const double period = sol.period();
    std::vector<double> edges;
    for (double b : sol.breakpoints()) {
        edges.push_back(b);
        edges.push_back(b + period / 2.0);
    }
    std::sort(edges.begin(), edges.end());
    std::vector<double> unique_edges;
    for (double e : edges)
        if (unique_edges.empty() || e - unique_edges.back() > 1e-15 * period)
            unique_edges.push_back(e);
    unique_edges.back() = period;
    return unique_edges;
}

inline std::complex<double> sampled_fourier(const pwmss::PiecewiseExpSolution& sol, int n,
                                            int total_nodes = 1 << 16) {
    const double period = sol.period();
    const double omega = 2.0 * pwmss::kPi / period;
    const std::vector<double> edges = full_period_kinks(sol);
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
        const double a = edges[seg], b = edges[seg + 1];
        int sub = std::max(8, static_cast<int>(std::ceil(total_nodes * (b - a) / period)));
        if (sub % 2 != 0) ++sub;
        const double h = (b - a) / sub;
        std::complex<double> sum(0.0, 0.0);
        for (int j = 0; j <= sub; ++j) {
            const double t = a + j * h;
            const std::complex<double> f =
                sol.value(t) * std::exp(std::complex<double>(0.0, -n * omega * t));
            const double weight = (j == 0 || j == sub) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            sum += weight * f;
        }
        acc += sum * (h / 3.0);
    }
    return acc / period;
}

// ---------------------------------------------------------------------------
// Independent cubic root oracle: long-double bisection for the one guaranteed
// negative real root, then synthetic-division deflation and the quadratic
// formula.  No Cardano, no Newton, no shared code with roots_lclr.
// ---------------------------------------------------------------------------

inline std::array<std::complex<double>, 3> bisection_cubic_roots(double a2, double a1,
                                                                 double a0) {
    const auto poly = [&](long double s) { return ((s + a2) * s + a1) * s + a0; };
    long double lo = -1.0L;
    while (poly(lo) > 0.0L) lo *= 2.0L;
    long double hi = 0.0L;
    for (int it = 0; it < 200; ++it) {
        const long double mid = (lo + hi) / 2.0L;
        if (poly(mid) > 0.0L) hi = mid;
        else lo = mid;
    }
    const long double real_root = (lo + hi) / 2.0L;
    const long double q1 = a2 + real_root;
    const long double q0 = a1 + real_root * q1;
    const long double disc = q1 * q1 - 4.0L * q0;
    std::array<std::complex<double>, 3> roots;
    roots[0] = {static_cast<double>(real_root), 0.0};
    if (disc >= 0.0L) {
        const long double sq = std::sqrt(disc);
        roots[1] = {static_cast<double>((-q1 - sq) / 2.0L), 0.0};
        roots[2] = {static_cast<double>((-q1 + sq) / 2.0L), 0.0};
    } else {
        const long double im = std::sqrt(-disc) / 2.0L;
        roots[1] = {static_cast<double>(-q1 / 2.0L), -static_cast<double>(im)};
        roots[2] = {static_cast<double>(-q1 / 2.0L), +static_cast<double>(im)};
    }
    return roots;
}

// Max |x(t)| over a dense uniform grid.
inline double dense_peak(const pwmss::PiecewiseExpSolution& sol, int grid = 4096) {
    double peak = 0.0;
    for (int g = 0; g < grid; ++g)
        peak = std::max(peak, std::abs(sol.value(g * sol.period() / grid)));
    return peak;
}

} // namespace testing_support
