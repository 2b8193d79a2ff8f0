#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pwmss/errors.hpp"

namespace pwmss {

inline constexpr double kPi = 3.14159265358979323846;

/// Half-wave anti-periodic train of rectangular voltage pulses.
///
/// On (0, T/2) the source voltage is 0 on (t_{2j}, t_{2j+1}) and +V_o on
/// (t_{2j+1}, t_{2j+2}), with the conventions t_0 = 0 and t_{2N+1} = T/2.
/// The second half period is the mirrored negative of the first,
/// v_s(t + T/2) = -v_s(t).  Immutable after construction.
class PwmTrain {
public:
    // Relative gap under which two adjacent instants are considered coincident
    // and the zero-width pulse/gap between them is dropped pairwise.
    static constexpr double kMergeTol = 1e-12;

    PwmTrain(double amplitude, double period, std::vector<double> instants)
        : amplitude_(amplitude), period_(period), instants_(std::move(instants)) {
        if (!(amplitude_ > 0.0) || !std::isfinite(amplitude_))
            throw InvalidParameter("pulse amplitude must be positive and finite");
        if (!(period_ > 0.0) || !std::isfinite(period_))
            throw InvalidParameter("period must be positive and finite");
        if (instants_.size() % 2 != 0)
            throw OddInstantCount("switching instant count must be even, got " +
                                  std::to_string(instants_.size()));
        const double half = period_ / 2.0;
        for (double t : instants_) {
            if (!std::isfinite(t) || t <= 0.0 || t >= half)
                throw InstantOutOfRange("switching instant " + std::to_string(t) +
                                        " outside open interval (0, T/2)");
        }
        for (std::size_t i = 0; i + 1 < instants_.size(); ++i) {
            if (instants_[i + 1] < instants_[i])
                throw NonMonotonicInstants("switching instants must be non-decreasing");
        }
        merge_degenerate_gaps();
    }

    double amplitude() const { return amplitude_; }
    double period() const { return period_; }
    double omega() const { return 2.0 * kPi / period_; }

    /// Number of pulses N in the half period.
    std::size_t pulse_count() const { return instants_.size() / 2; }

    const std::vector<double>& instants() const { return instants_; }

    /// Breakpoints t_0 = 0, t_1, ..., t_2N, t_{2N+1} = T/2.
    std::vector<double> breakpoints() const {
        std::vector<double> bp;
        bp.reserve(instants_.size() + 2);
        bp.push_back(0.0);
        bp.insert(bp.end(), instants_.begin(), instants_.end());
        bp.push_back(period_ / 2.0);
        return bp;
    }

private:
    void merge_degenerate_gaps() {
        const double tol = kMergeTol * period_;
        bool merged = true;
        while (merged) {
            merged = false;
            for (std::size_t i = 0; i + 1 < instants_.size(); ++i) {
                if (instants_[i + 1] - instants_[i] < tol) {
                    // Drops the pair: zero-width pulse disappears, zero-width
                    // gap concatenates its neighbouring pulses.
                    instants_.erase(instants_.begin() + static_cast<std::ptrdiff_t>(i),
                                    instants_.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                    merged = true;
                    break;
                }
            }
        }
    }

    double amplitude_;
    double period_;
    std::vector<double> instants_;
};

inline PwmTrain make_pwm_train(double amplitude, double period, std::vector<double> instants) {
    return PwmTrain(amplitude, period, std::move(instants));
}

/// Source voltage at time t.  Any real t is accepted; t is reduced modulo T
/// and the half-wave rule is applied on [T/2, T).  At an exact switching
/// instant the right-limit value is returned.
inline double vs_at(const PwmTrain& train, double t) {
    const double period = train.period();
    double tau = t - period * std::floor(t / period);
    double sign = 1.0;
    if (tau >= period / 2.0) {
        tau -= period / 2.0;
        sign = -1.0;
    }
    const auto& inst = train.instants();
    const auto crossed = std::upper_bound(inst.begin(), inst.end(), tau) - inst.begin();
    return (crossed % 2 == 1) ? sign * train.amplitude() : 0.0;
}

} // namespace pwmss
