#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "pwmss/errors.hpp"

namespace pwmss {

using Complex = std::complex<double>;

/// The 1-3 distinct characteristic roots of a load circuit, in a canonical
/// order (ascending real part, then imaginary part) fixed at construction so
/// coefficient columns are reproducible across runs.
class RootSet {
public:
    // Below this relative pairwise separation the closed-form coefficient
    // denominators (s_i - s_j) are considered degenerate.
    static constexpr double kRepeatedTol = 1e-9;
    // Above kRepeatedTol but below this the denominators still lose precision;
    // flagged, not rejected.
    static constexpr double kConditionWarnTol = 1e-6;

    static RootSet from_roots(std::vector<Complex> roots) { return RootSet(std::move(roots)); }

    std::size_t size() const { return roots_.size(); }
    const std::vector<Complex>& roots() const { return roots_; }
    const Complex& operator[](std::size_t i) const { return roots_[i]; }

    /// Smallest pairwise separation |s_i - s_j| / max(|s_i|, |s_j|); +inf for
    /// a single root.
    double min_separation() const { return min_separation_; }

    /// True when roots are distinct but close enough that coefficient
    /// formulas are poorly conditioned.
    bool ill_conditioned() const { return min_separation_ < kConditionWarnTol; }

private:
    explicit RootSet(std::vector<Complex> roots) : roots_(std::move(roots)) {
        if (roots_.empty() || roots_.size() > 3)
            throw InvalidParameter("root set must hold 1 to 3 roots");
        std::sort(roots_.begin(), roots_.end(), [](const Complex& a, const Complex& b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
        min_separation_ = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < roots_.size(); ++i) {
            if (!(roots_[i].real() < 0.0))
                throw InvalidParameter("characteristic root with non-negative real part; "
                                       "load is not strictly stable");
            for (std::size_t j = i + 1; j < roots_.size(); ++j) {
                const double scale = std::max(std::abs(roots_[i]), std::abs(roots_[j]));
                const double sep = std::abs(roots_[i] - roots_[j]) / scale;
                min_separation_ = std::min(min_separation_, sep);
            }
        }
        if (min_separation_ < kRepeatedTol)
            throw RepeatedRoots("characteristic roots not distinct (relative separation " +
                                std::to_string(min_separation_) + ")");
        check_conjugate_closure();
    }

    void check_conjugate_closure() const {
        // Non-real roots must occur in bit-identical conjugate pairs.
        std::vector<bool> paired(roots_.size(), false);
        for (std::size_t i = 0; i < roots_.size(); ++i) {
            if (roots_[i].imag() == 0.0 || paired[i]) continue;
            bool found = false;
            for (std::size_t j = 0; j < roots_.size(); ++j) {
                if (j == i || paired[j]) continue;
                if (roots_[j].real() == roots_[i].real() && roots_[j].imag() == -roots_[i].imag()) {
                    paired[i] = paired[j] = true;
                    found = true;
                    break;
                }
            }
            if (!found)
                throw InvalidParameter("non-real root without an exact conjugate partner");
        }
    }

    std::vector<Complex> roots_;
    double min_separation_ = 0.0;
};

} // namespace pwmss
