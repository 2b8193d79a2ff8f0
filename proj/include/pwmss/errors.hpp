#pragma once

#include <stdexcept>
#include <string>

namespace pwmss {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidParameter : Error {
    explicit InvalidParameter(const std::string& msg) : Error(msg) {}
};

// pwm train construction
struct NonMonotonicInstants : Error {
    explicit NonMonotonicInstants(const std::string& msg) : Error(msg) {}
};
struct OddInstantCount : Error {
    explicit OddInstantCount(const std::string& msg) : Error(msg) {}
};
struct InstantOutOfRange : Error {
    explicit InstantOutOfRange(const std::string& msg) : Error(msg) {}
};

// characteristic roots
struct RepeatedRoots : Error {
    explicit RepeatedRoots(const std::string& msg) : Error(msg) {}
};

// closed-form coefficients
struct OverflowGuard : Error {
    explicit OverflowGuard(const std::string& msg) : Error(msg) {}
};
struct ImaginaryResidueExceeded : Error {
    explicit ImaginaryResidueExceeded(const std::string& msg) : Error(msg) {}
};

// spectral analysis
struct DegenerateFrequency : Error {
    explicit DegenerateFrequency(const std::string& msg) : Error(msg) {}
};
struct ZeroFundamental : Error {
    explicit ZeroFundamental(const std::string& msg) : Error(msg) {}
};

// time-stepping oracle
struct NotSettled : Error {
    explicit NotSettled(const std::string& msg) : Error(msg) {}
};
struct MismatchedOutputKind : Error {
    explicit MismatchedOutputKind(const std::string& msg) : Error(msg) {}
};

// config / io
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace pwmss
