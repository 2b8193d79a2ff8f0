#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "pwmss/load_circuit.hpp"
#include "pwmss/root_set.hpp"

namespace pwmss {

namespace detail {

// One Newton step s <- s - p(s)/p'(s) on the monic cubic u^3 + b2 u^2 + b1 u + b0.
template <typename T>
inline T cubic_newton_step(T u, double b2, double b1, double b0) {
    const T value = ((u + b2) * u + b1) * u + b0;
    const T slope = (3.0 * u + 2.0 * b2) * u + b1;
    if (std::abs(slope) == 0.0) return u;
    return u - value / slope;
}

} // namespace detail

/// First-order load: single real root s = -R/L.
inline RootSet roots_lr(const Lr& load) {
    validate(load);
    return RootSet::from_roots({Complex(-load.R / load.L, 0.0)});
}

/// Roots of LC s^2 + (L/R) s + 1 = 0 via the numerically stable quadratic
/// formula (larger-magnitude root first, the other from the product
/// LC s_1 s_2 = 1).
inline RootSet roots_lrc(const Lrc& load) {
    validate(load);
    const double a = load.L * load.C;
    const double b = load.L / load.R;
    const double c = 1.0;
    const double disc = b * b - 4.0 * a * c;

    std::vector<Complex> roots;
    if (disc >= 0.0) {
        const double q = -(b + std::sqrt(disc)) / 2.0; // b > 0 for positive elements
        double s1 = q / a;
        double s2 = c / q;
        auto polish = [&](double s) {
            const double slope = 2.0 * a * s + b;
            if (slope != 0.0) s -= (a * s * s + b * s + c) / slope;
            return s;
        };
        roots = {Complex(polish(s1), 0.0), Complex(polish(s2), 0.0)};
    } else {
        double re = -b / (2.0 * a);
        double im = std::sqrt(-disc) / (2.0 * a);
        Complex s(re, im);
        const Complex slope = 2.0 * a * s + b;
        if (std::abs(slope) != 0.0) s -= (a * s * s + b * s + c) / slope;
        roots = {Complex(s.real(), -s.imag()), s};
    }
    return RootSet::from_roots(std::move(roots));
}

/// Roots of s^3 + (R/L1) s^2 + (1/C)(1/L + 1/L1) s + R/(L L1 C) = 0.
///
/// The cubic is rescaled by sigma = cbrt(constant term) so every intermediate
/// stays O(1) even for microsecond-scale time constants, solved by the
/// trigonometric/Cardano closed form, then polished with two Newton steps.
/// A complex pair is built from one computed root, so conjugate symmetry is
/// exact by construction.
inline RootSet roots_lclr(const Lclr& load) {
    validate(load);
    const double a2 = load.R / load.L1;
    const double a1 = (1.0 / load.C) * (1.0 / load.L + 1.0 / load.L1);
    const double a0 = load.R / (load.L * load.L1 * load.C);

    const double sigma = std::cbrt(a0);
    const double b2 = a2 / sigma;
    const double b1 = a1 / (sigma * sigma);
    const double b0 = 1.0;

    // Depressed cubic y^3 + p y + q, with u = y - b2/3.
    const double p = b1 - b2 * b2 / 3.0;
    const double q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
    const double disc = -4.0 * p * p * p - 27.0 * q * q;

    std::vector<Complex> roots;
    if (disc > 0.0) {
        // Three distinct real roots (requires p < 0).
        const double mag = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p), -1.0, 1.0);
        const double phi = std::acos(arg);
        for (int k = 0; k < 3; ++k) {
            const double y = mag * std::cos((phi - 2.0 * kPi * k) / 3.0);
            double u = y - b2 / 3.0;
            u = detail::cubic_newton_step(u, b2, b1, b0);
            u = detail::cubic_newton_step(u, b2, b1, b0);
            roots.emplace_back(sigma * u, 0.0);
        }
    } else {
        // One real root plus a conjugate pair.
        double y_real;
        if (q == 0.0) {
            y_real = 0.0;
        } else {
            const double d2 = q * q / 4.0 + p * p * p / 27.0; // >= 0 here
            const double r = -q / 2.0 - std::copysign(std::sqrt(std::max(d2, 0.0)), q);
            const double alpha = std::cbrt(r);
            y_real = (alpha == 0.0) ? 0.0 : alpha - p / (3.0 * alpha);
        }
        double u_real = y_real - b2 / 3.0;
        u_real = detail::cubic_newton_step(u_real, b2, b1, b0);
        u_real = detail::cubic_newton_step(u_real, b2, b1, b0);

        // Deflated quadratic y^2 + y_r y + (p + y_r^2).
        const double radicand = std::max(3.0 * y_real * y_real + 4.0 * p, 0.0);
        Complex u_pair(-y_real / 2.0 - b2 / 3.0, std::sqrt(radicand) / 2.0);
        u_pair = detail::cubic_newton_step(u_pair, b2, b1, b0);
        u_pair = detail::cubic_newton_step(u_pair, b2, b1, b0);

        roots.emplace_back(sigma * u_real, 0.0);
        const Complex s_pair = sigma * u_pair;
        roots.emplace_back(s_pair.real(), -std::abs(s_pair.imag()));
        roots.emplace_back(s_pair.real(), +std::abs(s_pair.imag()));
    }
    return RootSet::from_roots(std::move(roots));
}

inline RootSet characteristic_roots(const LoadCircuit& load) {
    return std::visit(
        [](const auto& l) -> RootSet {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Lr>) return roots_lr(l);
            else if constexpr (std::is_same_v<T, Lrc>) return roots_lrc(l);
            else return roots_lclr(l);
        },
        load);
}

} // namespace pwmss
