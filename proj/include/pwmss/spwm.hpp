#pragma once

#include <cmath>
#include <vector>

#include "pwmss/errors.hpp"
#include "pwmss/pwm_train.hpp"

namespace pwmss {

/// Uniform-sampled sinusoidal PWM: the half period is split into N equal
/// slots and each slot carries one pulse, centered, with width proportional
/// to the sine value at the slot center.
struct SpwmSpec {
    int pulses_per_half = 1; // N
    double modulation = 0.9; // m in [0, 1]
    double frequency = 60.0; // hertz
    double amplitude = 100.0; // V_o, volts
};

inline void validate(const SpwmSpec& spec) {
    if (spec.pulses_per_half < 1 || spec.pulses_per_half > 1000000)
        throw InvalidParameter("SPWM pulse count must lie in [1, 1000000]");
    if (!(spec.modulation >= 0.0 && spec.modulation <= 1.0))
        throw InvalidParameter("modulation index must lie in [0, 1]");
    detail::require_positive(spec.frequency, "frequency");
    detail::require_positive(spec.amplitude, "amplitude");
}

/// Switching instants for slot j (1-based): center c_j = (j - 1/2) T/(2N),
/// width w_j = m (T/2N) sin(omega c_j), pulse [c_j - w_j/2, c_j + w_j/2].
/// Widths are capped just below the slot width so instants stay strictly
/// ordered, and pulses narrower than the train merge tolerance are dropped.
inline PwmTrain generate(const SpwmSpec& spec) {
    validate(spec);
    const double period = 1.0 / spec.frequency;
    const double omega = 2.0 * kPi / period;
    const double slot = period / (2.0 * spec.pulses_per_half);

    std::vector<double> instants;
    instants.reserve(2 * static_cast<std::size_t>(spec.pulses_per_half));
    for (int j = 1; j <= spec.pulses_per_half; ++j) {
        const double center = (j - 0.5) * slot;
        double width = spec.modulation * slot * std::sin(omega * center);
        width = std::min(width, slot * (1.0 - 1e-9));
        if (width <= PwmTrain::kMergeTol * period) continue;
        instants.push_back(center - width / 2.0);
        instants.push_back(center + width / 2.0);
    }
    return make_pwm_train(spec.amplitude, period, std::move(instants));
}

} // namespace pwmss
