#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pwmss/errors.hpp"
#include "pwmss/piecewise_solution.hpp"
#include "pwmss/pwm_train.hpp"
#include "pwmss/solver.hpp"
#include "pwmss/spwm.hpp"

namespace pwmss {

/// One-sided complex Fourier coefficients c_n = (1/T) int_0^T x(t) e^{-i n w t} dt
/// for n = 1..n_max.  Even harmonics of a half-wave symmetric waveform are
/// exactly zero and stored as such.
struct HarmonicSpectrum {
    double fundamental_hz = 0.0;
    std::vector<Complex> coefficients; // coefficients[n-1] = c_n

    std::size_t max_harmonic() const { return coefficients.size(); }
    const Complex& c(std::size_t n) const { return coefficients[n - 1]; }
    double magnitude(std::size_t n) const { return std::abs(coefficients[n - 1]); }
};

namespace detail {

// e^z - 1 without cancellation for small |z|.
inline Complex cexpm1(const Complex& z) {
    const double expm1_re = std::expm1(z.real());
    const double cos_im = std::cos(z.imag());
    const double sin_half = std::sin(z.imag() / 2.0);
    const double re = expm1_re * cos_im - 2.0 * sin_half * sin_half;
    const double im = (expm1_re + 1.0) * std::sin(z.imag());
    return {re, im};
}

// int_0^w e^{z u} du, including the z -> 0 limit (= w).
inline Complex exp_integral(const Complex& z, double width) {
    if (z == Complex(0.0, 0.0)) return {width, 0.0};
    return cexpm1(z * width) / z;
}

// A waveform described segment by segment as  sum_m coeffs[m] e^{s_m (t-start)}
// + constant.  Carries everything fourier_coefficient() needs; the segments
// need not cover the whole period.
struct PiecewiseSegments {
    std::vector<Complex> roots;
    std::vector<double> start;
    std::vector<double> width;
    std::vector<std::vector<Complex>> coeffs; // empty rows allowed when roots is empty
    std::vector<double> constant;
    double period = 0.0;
};

// (1/T) int over the listed segments of x(t) e^{-i n w t} dt, in closed form.
inline Complex fourier_coefficient(const PiecewiseSegments& ps, int n) {
    const double omega_n = n * 2.0 * kPi / ps.period;
    const Complex rotation(0.0, -omega_n);
    Complex acc(0.0, 0.0);
    for (std::size_t seg = 0; seg < ps.start.size(); ++seg) {
        const Complex phase = std::exp(rotation * ps.start[seg]);
        Complex inner(0.0, 0.0);
        for (std::size_t m = 0; m < ps.roots.size(); ++m)
            inner += ps.coeffs[seg][m] * exp_integral(ps.roots[m] + rotation, ps.width[seg]);
        inner += ps.constant[seg] * exp_integral(rotation, ps.width[seg]);
        acc += phase * inner;
    }
    return acc / ps.period;
}

inline PiecewiseSegments half_period_segments(const PiecewiseExpSolution& sol) {
    PiecewiseSegments ps;
    ps.roots = sol.roots();
    ps.period = sol.period();
    const auto& bp = sol.breakpoints();
    for (std::size_t k = 0; k < sol.intervals(); ++k) {
        ps.start.push_back(bp[k]);
        ps.width.push_back(bp[k + 1] - bp[k]);
        ps.coeffs.push_back(sol.coefficients()[k]);
        ps.constant.push_back(sol.forcing()[k]);
    }
    return ps;
}

inline PiecewiseSegments half_period_segments(const PwmTrain& train) {
    PiecewiseSegments ps;
    ps.period = train.period();
    const auto bp = train.breakpoints();
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        ps.start.push_back(bp[k]);
        ps.width.push_back(bp[k + 1] - bp[k]);
        ps.coeffs.emplace_back();
        ps.constant.push_back((k % 2 == 1) ? train.amplitude() : 0.0);
    }
    return ps;
}

// Shared by the solution and train overloads: integrate over the first half
// period, double the odd harmonics, zero the even ones.
inline HarmonicSpectrum spectrum_from_segments(const PiecewiseSegments& ps, int n_max) {
    if (n_max <= 0)
        throw DegenerateFrequency("harmonic count must be positive, got " +
                                  std::to_string(n_max));
    HarmonicSpectrum spec;
    spec.fundamental_hz = 1.0 / ps.period;
    spec.coefficients.resize(static_cast<std::size_t>(n_max), Complex(0.0, 0.0));
    for (int n = 1; n <= n_max; n += 2)
        spec.coefficients[static_cast<std::size_t>(n - 1)] = 2.0 * fourier_coefficient(ps, n);
    return spec;
}

} // namespace detail

/// Exact spectrum of a solved waveform: every segment term integrates in
/// closed form, int e^{(s - i n w) t} dt, with the near-resonant s ~ i n w
/// case handled by the analytic limit rather than rejected.
inline HarmonicSpectrum spectrum(const PiecewiseExpSolution& sol, int n_max = 200) {
    return detail::spectrum_from_segments(detail::half_period_segments(sol), n_max);
}

/// Spectrum of the raw PWM source voltage.
inline HarmonicSpectrum spectrum(const PwmTrain& train, int n_max = 200) {
    return detail::spectrum_from_segments(detail::half_period_segments(train), n_max);
}

/// THD = 100 sqrt(sum_{n>=2} |c_n|^2) / |c_1|, in percent.
inline double thd(const HarmonicSpectrum& spec) {
    if (spec.coefficients.empty() || std::abs(spec.coefficients[0]) == 0.0)
        throw ZeroFundamental("THD undefined for zero fundamental");
    double harmonic_power = 0.0;
    for (std::size_t n = 2; n <= spec.max_harmonic(); ++n) {
        const double mag = spec.magnitude(n);
        harmonic_power += mag * mag;
    }
    return 100.0 * std::sqrt(harmonic_power) / spec.magnitude(1);
}

/// Time-domain mean square (1/T) int_0^T x^2 dt, integrated in closed form.
/// Independent target for Parseval checks against the spectrum.
inline double mean_square(const PiecewiseExpSolution& sol) {
    const auto segs = detail::half_period_segments(sol);
    Complex acc(0.0, 0.0);
    for (std::size_t seg = 0; seg < segs.start.size(); ++seg) {
        const auto& coeffs = segs.coeffs[seg];
        const double chi = segs.constant[seg];
        const double width = segs.width[seg];
        for (std::size_t m = 0; m < segs.roots.size(); ++m)
            for (std::size_t j = 0; j < segs.roots.size(); ++j)
                acc += coeffs[m] * coeffs[j] *
                       detail::exp_integral(segs.roots[m] + segs.roots[j], width);
        for (std::size_t m = 0; m < segs.roots.size(); ++m)
            acc += 2.0 * chi * coeffs[m] * detail::exp_integral(segs.roots[m], width);
        acc += chi * chi * width;
    }
    // x^2 is T/2-periodic, so the half-period integral carries the full mean.
    return 2.0 * acc.real() / sol.period();
}

/// Peak deviation of the waveform from its fundamental component, sampled on
/// a uniform grid over one period.
inline double peak_ripple(const PiecewiseExpSolution& sol, const HarmonicSpectrum& spec,
                          int grid = 8192) {
    const double period = sol.period();
    const double omega = 2.0 * kPi / period;
    const Complex c1 = spec.coefficients.empty() ? Complex(0.0, 0.0) : spec.coefficients[0];
    double worst = 0.0;
    for (int g = 0; g < grid; ++g) {
        const double t = g * period / grid;
        const double fundamental = 2.0 * (c1 * std::exp(Complex(0.0, omega * t))).real();
        worst = std::max(worst, std::abs(sol.value(t) - fundamental));
    }
    return worst;
}

struct SweepRow {
    double inductance = 0.0;  // henries
    double capacitance = 0.0; // farads
    double thd_percent = 0.0;
    double peak_ripple = 0.0; // amperes
    bool ok = false;
    std::string status;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// THD/ripple of the L-C-LR output current across (L, C) pairs, with L1 and R
/// held at the base values.  Rows are independent; a per-row failure (e.g.
/// repeated roots) is recorded in its status and the sweep continues.
inline SweepResult sweep_lclr(const Lclr& base, const SpwmSpec& train_spec,
                              const std::vector<std::pair<double, double>>& lc_pairs,
                              int n_max = 200) {
    const PwmTrain train = generate(train_spec);
    SweepResult result;
    result.rows.reserve(lc_pairs.size());
    for (const auto& [inductance, capacitance] : lc_pairs) {
        SweepRow row;
        row.inductance = inductance;
        row.capacitance = capacitance;
        try {
            const Lclr load{inductance, capacitance, base.L1, base.R};
            const PiecewiseExpSolution i1 = solve_lclr(load, train);
            const HarmonicSpectrum spec = spectrum(i1, n_max);
            row.thd_percent = thd(spec);
            row.peak_ripple = peak_ripple(i1, spec);
            row.ok = true;
            row.status = "ok";
        } catch (const Error& err) {
            row.ok = false;
            row.status = err.what();
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

} // namespace pwmss
