#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pwmss/errors.hpp"
#include "pwmss/load_circuit.hpp"
#include "pwmss/piecewise_solution.hpp"
#include "pwmss/pwm_train.hpp"
#include "pwmss/roots.hpp"

namespace pwmss {

/// Per-root coefficient columns of a steady-state solution, produced by
/// telescoping the decoupled two-diagonal recurrences
///
///   A_k - A_{k+1} = sign_k P_m e^{-s_m t_k},   sign_k = first_sign (-1)^{k-1}
///
/// and closing them with the anti-periodic boundary condition
/// A_1 + A_{2N+1} e^{s_m T/2} = 0.  Column m treats roots[m] as the
/// distinguished root of its permutation; the prefactor P_m carries the
/// product/difference terms of the remaining roots.
///
/// Rows are stored anchored at interval left edges (see PiecewiseExpSolution):
/// anchored[k][m] = A_{k+1} e^{s_m t_k}.  In that form the recurrence reads
/// anchored[k][m] = anchored[k-1][m] e^{s_m w_k} - sign_k P_m, with w_k the
/// interval width, which is what build() evaluates; all exponent arguments
/// keep non-positive real parts, so the table never overflows for stable
/// roots regardless of how stiff the circuit is.
struct CoefficientTable {
    std::vector<Complex> roots;
    std::vector<std::vector<Complex>> anchored; // [interval][root]
    std::vector<Complex> step_prefactor;        // P_m
    int first_sign = 1;
    std::vector<double> breakpoints; // t_0 .. t_{2N+1}
    double period = 0.0;

    std::size_t intervals() const { return anchored.size(); }

    int sign_at(std::size_t k_one_based) const {
        return (k_one_based % 2 == 1) ? first_sign : -first_sign;
    }

    /// Relative residual of A_1 + A_{2N+1} e^{s T/2} = 0 for column m,
    /// evaluated in anchored form.
    double closure_residual(std::size_t m) const {
        const Complex s = roots[m];
        const double t_last = breakpoints[breakpoints.size() - 2];
        const Complex lead = anchored.front()[m];
        const Complex wrap = anchored.back()[m] * std::exp(s * (period / 2.0 - t_last));
        const double scale = std::max(std::abs(lead), std::abs(wrap));
        if (scale == 0.0) return 0.0;
        return std::abs(lead + wrap) / scale;
    }

    /// Relative mismatch between consecutive rows and the per-step increment
    /// formula, for step k = 1..2N.
    double telescoping_residual(std::size_t k_one_based, std::size_t m) const {
        const Complex s = roots[m];
        const double width = breakpoints[k_one_based] - breakpoints[k_one_based - 1];
        const Complex stepped = anchored[k_one_based - 1][m] * std::exp(s * width) -
                                anchored[k_one_based][m];
        const Complex target = double(sign_at(k_one_based)) * step_prefactor[m];
        const double scale = std::max({std::abs(stepped), std::abs(target), 1.0e-300});
        return std::abs(stepped - target) / scale;
    }

    PiecewiseExpSolution to_solution(double forcing_scale, OutputKind kind) const {
        return PiecewiseExpSolution(roots, anchored, breakpoints, period, forcing_scale, kind);
    }
};

namespace detail {

// Pairs up bit-identical conjugate roots and forces the corresponding values
// to be exact conjugates (real-root entries are realified).  Floating-point
// dirt from evaluating the permuted formulas separately would otherwise leave
// a spurious imaginary residue in the evaluated waveform.
inline void symmetrize_conjugates(const std::vector<Complex>& roots,
                                  std::vector<Complex>& values) {
    std::vector<bool> done(roots.size(), false);
    for (std::size_t m = 0; m < roots.size(); ++m) {
        if (done[m]) continue;
        if (roots[m].imag() == 0.0) {
            values[m] = Complex(values[m].real(), 0.0);
            done[m] = true;
            continue;
        }
        for (std::size_t j = m + 1; j < roots.size(); ++j) {
            if (done[j]) continue;
            if (roots[j].real() == roots[m].real() && roots[j].imag() == -roots[m].imag()) {
                const Complex avg = (values[m] + std::conj(values[j])) * 0.5;
                values[m] = avg;
                values[j] = std::conj(avg);
                done[m] = done[j] = true;
                break;
            }
        }
    }
}

inline CoefficientTable build_coefficient_table(std::vector<Complex> roots,
                                                std::vector<Complex> step_prefactor,
                                                int first_sign, const PwmTrain& train) {
    symmetrize_conjugates(roots, step_prefactor);
    for (const Complex& p : step_prefactor)
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
            throw OverflowGuard("non-finite coefficient prefactor");

    CoefficientTable table;
    table.roots = std::move(roots);
    table.step_prefactor = std::move(step_prefactor);
    table.first_sign = first_sign;
    table.breakpoints = train.breakpoints();
    table.period = train.period();

    const auto& instants = train.instants();
    const double half = table.period / 2.0;
    const std::size_t rows = instants.size() + 1;
    table.anchored.assign(rows, std::vector<Complex>(table.roots.size()));

    for (std::size_t m = 0; m < table.roots.size(); ++m) {
        const Complex s = table.roots[m];
        // A_1 = P_m sum_n sign_n e^{-s t_n} / (1 + e^{-s T/2}); both the sum
        // and the denominator are evaluated with e^{-s T/2} factored out so
        // every exponential argument has a non-positive real part.
        Complex shifted_sum(0.0, 0.0);
        double sign = first_sign;
        for (double t_n : instants) {
            shifted_sum += sign * std::exp(s * (half - t_n));
            sign = -sign;
        }
        table.anchored[0][m] =
            table.step_prefactor[m] * shifted_sum / (1.0 + std::exp(s * half));

        sign = first_sign;
        for (std::size_t k = 1; k < rows; ++k) {
            const double width = table.breakpoints[k] - table.breakpoints[k - 1];
            table.anchored[k][m] = table.anchored[k - 1][m] * std::exp(s * width) -
                                   sign * table.step_prefactor[m];
            sign = -sign;
        }
    }

    for (auto& row : table.anchored) {
        symmetrize_conjugates(table.roots, row);
        for (const Complex& c : row)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw OverflowGuard("non-finite piecewise coefficient");
    }
    return table;
}

// Rescales coefficient columns and the forcing constant; used to recover the
// companion state variables of a solved circuit through its state equations.
inline PiecewiseExpSolution transform_solution(const PiecewiseExpSolution& sol,
                                               const std::vector<Complex>& multipliers,
                                               double forcing_scale, OutputKind kind) {
    std::vector<std::vector<Complex>> coeffs = sol.coefficients();
    for (auto& row : coeffs)
        for (std::size_t m = 0; m < row.size(); ++m) row[m] *= multipliers[m];
    return PiecewiseExpSolution(sol.roots(), std::move(coeffs), sol.breakpoints(),
                                sol.period(), forcing_scale, kind);
}

} // namespace detail

/// Coefficients for the LR output current i(t) = A_k e^{st} + chi_k,
/// s = -R/L, increments A_k - A_{k+1} = (-1)^{k+1} (V_o/R) e^{-s t_k}.
inline CoefficientTable coefficient_table(const Lr& load, const PwmTrain& train) {
    RootSet rs = roots_lr(load);
    return detail::build_coefficient_table(rs.roots(),
                                           {Complex(train.amplitude() / load.R, 0.0)},
                                           +1, train);
}

/// Coefficients for the L-RC capacitor voltage.  Column m's prefactor is
/// V_o s_other / (s_m - s_other); the increments carry (-1)^k.  The second
/// column is the first with s_1 and s_2 interchanged.
inline CoefficientTable coefficient_table(const Lrc& load, const PwmTrain& train) {
    RootSet rs = roots_lrc(load);
    const Complex s1 = rs[0], s2 = rs[1];
    const double vo = train.amplitude();
    std::vector<Complex> prefactor = {vo * s2 / (s1 - s2), vo * s1 / (s2 - s1)};
    return detail::build_coefficient_table(rs.roots(), std::move(prefactor), -1, train);
}

/// Coefficients for the L-C-LR output current i_1.  Column m's prefactor is
/// (V_o/R) s_a s_b / ((s_m - s_a)(s_m - s_b)) over the other two roots; the
/// increments carry (-1)^{k+1}; remaining columns follow by permuting the
/// distinguished root.
inline CoefficientTable coefficient_table(const Lclr& load, const PwmTrain& train) {
    RootSet rs = roots_lclr(load);
    const double gain = train.amplitude() / load.R;
    std::vector<Complex> prefactor(3);
    for (std::size_t m = 0; m < 3; ++m) {
        Complex numerator(1.0, 0.0), denominator(1.0, 0.0);
        for (std::size_t j = 0; j < 3; ++j) {
            if (j == m) continue;
            numerator *= rs[j];
            denominator *= rs[m] - rs[j];
        }
        prefactor[m] = gain * numerator / denominator;
    }
    return detail::build_coefficient_table(rs.roots(), std::move(prefactor), +1, train);
}

inline PiecewiseExpSolution solve_lr(const Lr& load, const PwmTrain& train) {
    return coefficient_table(load, train)
        .to_solution(train.amplitude() / load.R, OutputKind::current_i);
}

inline PiecewiseExpSolution solve_lrc(const Lrc& load, const PwmTrain& train) {
    return coefficient_table(load, train).to_solution(train.amplitude(), OutputKind::voltage_vc);
}

inline PiecewiseExpSolution solve_lclr(const Lclr& load, const PwmTrain& train) {
    return coefficient_table(load, train)
        .to_solution(train.amplitude() / load.R, OutputKind::current_i1);
}

/// Designated output per load: i for LR, v_R = v_C for L-RC, i_1 for L-C-LR.
inline PiecewiseExpSolution solve(const LoadCircuit& load, const PwmTrain& train) {
    return std::visit(
        [&](const auto& l) -> PiecewiseExpSolution {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Lr>) return solve_lr(l, train);
            else if constexpr (std::is_same_v<T, Lrc>) return solve_lrc(l, train);
            else return solve_lclr(l, train);
        },
        load);
}

/// Source/inductor current of the L-RC circuit recovered from the solved
/// capacitor voltage via i = C dv_C/dt + v_C/R.
inline PiecewiseExpSolution lrc_source_current(const PiecewiseExpSolution& vc, const Lrc& load) {
    if (vc.output_kind() != OutputKind::voltage_vc)
        throw MismatchedOutputKind("expected a v_C solution");
    std::vector<Complex> mult;
    mult.reserve(vc.roots().size());
    for (const Complex& s : vc.roots()) mult.push_back(load.C * s + 1.0 / load.R);
    return detail::transform_solution(vc, mult, vc.forcing_scale() / load.R,
                                      OutputKind::current_i);
}

/// Capacitor voltage of the L-C-LR circuit from the solved branch current,
/// v_C = L1 di_1/dt + R i_1.
inline PiecewiseExpSolution lclr_capacitor_voltage(const PiecewiseExpSolution& i1,
                                                   const Lclr& load) {
    if (i1.output_kind() != OutputKind::current_i1)
        throw MismatchedOutputKind("expected an i_1 solution");
    std::vector<Complex> mult;
    mult.reserve(i1.roots().size());
    for (const Complex& s : i1.roots()) mult.push_back(load.L1 * s + load.R);
    return detail::transform_solution(i1, mult, i1.forcing_scale() * load.R,
                                      OutputKind::voltage_vc);
}

/// Source/inductor current of the L-C-LR circuit from the solved branch
/// current, i = C dv_C/dt + i_1 = C L1 i_1'' + C R i_1' + i_1.
inline PiecewiseExpSolution lclr_source_current(const PiecewiseExpSolution& i1,
                                                const Lclr& load) {
    if (i1.output_kind() != OutputKind::current_i1)
        throw MismatchedOutputKind("expected an i_1 solution");
    std::vector<Complex> mult;
    mult.reserve(i1.roots().size());
    for (const Complex& s : i1.roots())
        mult.push_back(load.C * load.L1 * s * s + load.C * load.R * s + 1.0);
    return detail::transform_solution(i1, mult, i1.forcing_scale(), OutputKind::current_i);
}

/// Every state variable of a solved circuit, for waveform export.
struct CircuitSolution {
    LoadKind kind;
    PiecewiseExpSolution i;                  // source/inductor current, all circuits
    std::optional<PiecewiseExpSolution> i1;  // L-C-LR only
    std::optional<PiecewiseExpSolution> vc;  // L-RC and L-C-LR

    const PiecewiseExpSolution& output() const {
        switch (kind) {
        case LoadKind::lr: return i;
        case LoadKind::lrc: return *vc;
        case LoadKind::lclr: return *i1;
        }
        return i;
    }
};

inline CircuitSolution solve_all(const LoadCircuit& load, const PwmTrain& train) {
    if (const auto* lr = std::get_if<Lr>(&load)) {
        return CircuitSolution{LoadKind::lr, solve_lr(*lr, train), std::nullopt, std::nullopt};
    }
    if (const auto* lrc = std::get_if<Lrc>(&load)) {
        PiecewiseExpSolution vc = solve_lrc(*lrc, train);
        PiecewiseExpSolution i = lrc_source_current(vc, *lrc);
        return CircuitSolution{LoadKind::lrc, std::move(i), std::nullopt, std::move(vc)};
    }
    const auto& lclr = std::get<Lclr>(load);
    PiecewiseExpSolution i1 = solve_lclr(lclr, train);
    PiecewiseExpSolution vc = lclr_capacitor_voltage(i1, lclr);
    PiecewiseExpSolution i = lclr_source_current(i1, lclr);
    return CircuitSolution{LoadKind::lclr, std::move(i), std::move(i1), std::move(vc)};
}

} // namespace pwmss
