#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "pwmss/errors.hpp"
#include "pwmss/load_circuit.hpp"
#include "pwmss/root_set.hpp"

namespace pwmss {

/// Periodic steady-state waveform made of one exponential sum per
/// inter-switching interval:
///
///   x(t) = sum_m  c[k][m] e^{s_m (t - t_{k-1})} + chi_k,   t_{k-1} < t < t_k
///
/// on the first half period, extended by anti-periodicity x(t + T/2) = -x(t).
///
/// Coefficients are stored anchored at the left breakpoint of their interval
/// (c[k][m] = A_k e^{s_m t_{k-1}} in terms of the raw interval coefficient
/// A_k), so every stored value and every exponential evaluated here has a
/// non-positive real exponent argument for stable roots.  The raw and
/// anchored forms are algebraically identical.
class PiecewiseExpSolution {
public:
    static constexpr double kImagTol = 1e-9;

    PiecewiseExpSolution(std::vector<Complex> roots,
                         std::vector<std::vector<Complex>> anchored_coeffs,
                         std::vector<double> breakpoints, double period,
                         double forcing_scale, OutputKind kind)
        : roots_(std::move(roots)),
          coeffs_(std::move(anchored_coeffs)),
          breakpoints_(std::move(breakpoints)),
          period_(period),
          forcing_scale_(forcing_scale),
          kind_(kind) {
        if (breakpoints_.size() < 2 || coeffs_.size() + 1 != breakpoints_.size())
            throw InvalidParameter("coefficient rows must match breakpoint intervals");
        forcing_.resize(coeffs_.size());
        for (std::size_t k = 0; k < forcing_.size(); ++k) {
            // chi_k = (scale/2) (1 + (-1)^k) with k 1-based: 0 on odd, scale on even.
            forcing_[k] = (k % 2 == 1) ? forcing_scale_ : 0.0;
        }
        peak_hint_ = 0.0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k].size() != roots_.size())
                throw InvalidParameter("coefficient row width must match root count");
            double bound = std::abs(forcing_[k]);
            for (const Complex& c : coeffs_[k]) {
                if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                    throw OverflowGuard("non-finite piecewise coefficient");
                bound += std::abs(c);
            }
            peak_hint_ = std::max(peak_hint_, bound);
        }
    }

    const std::vector<Complex>& roots() const { return roots_; }
    const std::vector<std::vector<Complex>>& coefficients() const { return coeffs_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& forcing() const { return forcing_; }
    double forcing_scale() const { return forcing_scale_; }
    double period() const { return period_; }
    OutputKind output_kind() const { return kind_; }
    std::size_t intervals() const { return coeffs_.size(); }

    /// Upper bound on |x(t)|; used as the scale for residue tolerances.
    double peak_hint() const { return peak_hint_; }

    double value(double t) const { return eval(t, 0); }
    double derivative(double t, int order = 1) const { return eval(t, order); }

    /// Evaluate interval k's own expression (0-based interval index) without
    /// periodic reduction.  Lets callers take one-sided limits at breakpoints.
    double segment_value(std::size_t k, double t, int order = 0) const {
        const double u = t - breakpoints_[k];
        Complex acc(0.0, 0.0);
        double magnitude = 0.0;
        for (std::size_t m = 0; m < roots_.size(); ++m) {
            Complex factor = coeffs_[k][m];
            for (int j = 0; j < order; ++j) factor *= roots_[m];
            const Complex term = factor * std::exp(roots_[m] * u);
            acc += term;
            magnitude += std::abs(term.real()) + std::abs(term.imag());
        }
        const double forcing_term = (order == 0) ? forcing_[k] : 0.0;
        magnitude += std::abs(forcing_term);
        if (std::abs(acc.imag()) > kImagTol * magnitude)
            throw ImaginaryResidueExceeded("imaginary residue " + std::to_string(acc.imag()) +
                                           " at t=" + std::to_string(t));
        return acc.real() + forcing_term;
    }

private:
    double eval(double t, int order) const {
        double tau = t - period_ * std::floor(t / period_);
        double sign = 1.0;
        const double half = period_ / 2.0;
        if (tau >= half) {
            // Anti-periodic extension; all derivatives inherit the sign flip.
            tau -= half;
            sign = -1.0;
        }
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), tau);
        std::size_t k = static_cast<std::size_t>(it - breakpoints_.begin());
        k = (k == 0) ? 0 : k - 1;
        if (k >= coeffs_.size()) k = coeffs_.size() - 1;
        return sign * segment_value(k, tau, order);
    }

    std::vector<Complex> roots_;
    std::vector<std::vector<Complex>> coeffs_;
    std::vector<double> breakpoints_;
    std::vector<double> forcing_;
    double period_;
    double forcing_scale_;
    OutputKind kind_;
    double peak_hint_;
};

inline double evaluate(const PiecewiseExpSolution& sol, double t) { return sol.value(t); }

} // namespace pwmss
