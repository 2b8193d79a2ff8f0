#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "pwmss/errors.hpp"

namespace pwmss {

/// Series inductor into a resistor; output is the current i through R.
struct Lr {
    double R = 0.0; // ohms
    double L = 0.0; // henries
};

/// Series inductor into a parallel R-C tank; output is v_R(t) = v_C(t).
struct Lrc {
    double L = 0.0; // henries
    double R = 0.0; // ohms
    double C = 0.0; // farads
};

/// Series inductor, shunt capacitor, then a series L1-R branch; output is
/// the branch current i_1 through R.
struct Lclr {
    double L = 0.0;  // henries
    double C = 0.0;  // farads
    double L1 = 0.0; // henries
    double R = 0.0;  // ohms
};

using LoadCircuit = std::variant<Lr, Lrc, Lclr>;

enum class LoadKind { lr, lrc, lclr };

inline LoadKind kind_of(const LoadCircuit& load) {
    if (std::holds_alternative<Lr>(load)) return LoadKind::lr;
    if (std::holds_alternative<Lrc>(load)) return LoadKind::lrc;
    return LoadKind::lclr;
}

namespace detail {
inline void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidParameter(std::string(name) + " must be positive and finite");
}
} // namespace detail

inline void validate(const Lr& load) {
    detail::require_positive(load.R, "R");
    detail::require_positive(load.L, "L");
}

inline void validate(const Lrc& load) {
    detail::require_positive(load.L, "L");
    detail::require_positive(load.R, "R");
    detail::require_positive(load.C, "C");
}

inline void validate(const Lclr& load) {
    detail::require_positive(load.L, "L");
    detail::require_positive(load.C, "C");
    detail::require_positive(load.L1, "L1");
    detail::require_positive(load.R, "R");
}

inline void validate(const LoadCircuit& load) {
    std::visit([](const auto& l) { validate(l); }, load);
}

/// Which physical variable a solved waveform represents.
enum class OutputKind { current_i, current_i1, voltage_vc };

inline const char* to_string(OutputKind kind) {
    switch (kind) {
    case OutputKind::current_i: return "i";
    case OutputKind::current_i1: return "i_1";
    case OutputKind::voltage_vc: return "v_C";
    }
    return "?";
}

/// Instantaneous circuit state.  Only the fields meaningful for the circuit
/// kind are populated: i for LR; i, v_C for L-RC; all three for L-C-LR.
struct StateVector {
    double i = 0.0;  // amperes, source/inductor current
    double i1 = 0.0; // amperes, output branch current (L-C-LR)
    double vc = 0.0; // volts, capacitor voltage
};

inline bool has_output(LoadKind kind, OutputKind out) {
    switch (kind) {
    case LoadKind::lr: return out == OutputKind::current_i;
    case LoadKind::lrc: return out == OutputKind::current_i || out == OutputKind::voltage_vc;
    case LoadKind::lclr: return true;
    }
    return false;
}

} // namespace pwmss
