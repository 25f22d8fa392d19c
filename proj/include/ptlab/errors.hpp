#pragma once

#include <stdexcept>
#include <string>

namespace ptlab {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Gamma function evaluated at (or too close to) a non-positive integer.
struct PoleError : Error {
    explicit PoleError(const std::string& msg) : Error(msg) {}
};

// Argument outside the tabulated range of a sampled potential.
struct OutOfRangeError : Error {
    explicit OutOfRangeError(const std::string& msg) : Error(msg) {}
};

// Potential fails the V*(-x) = V(x) symmetry check.
struct NotPTSymmetricError : Error {
    explicit NotPTSymmetricError(const std::string& msg) : Error(msg) {}
};

// Operation defined only for a specific potential family.
struct UnsupportedPotentialError : Error {
    explicit UnsupportedPotentialError(const std::string& msg) : Error(msg) {}
};

// Requested state has no decaying (square-integrable) realisation.
struct NotNormalizableError : Error {
    explicit NotNormalizableError(const std::string& msg) : Error(msg) {}
};

// Solution magnitude left the representable range during integration.
struct OverflowError : Error {
    explicit OverflowError(const std::string& msg) : Error(msg) {}
};

// Plane-wave coefficient extraction at |k| ~ 0 is ill-posed.
struct ZeroMomentumError : Error {
    explicit ZeroMomentumError(const std::string& msg) : Error(msg) {}
};

// Grid is not reflection-symmetric about x = 0 (or sizes disagree).
struct AsymmetricGridError : Error {
    explicit AsymmetricGridError(const std::string& msg) : Error(msg) {}
};

// Two fields that must share one grid do not.
struct GridMismatchError : Error {
    explicit GridMismatchError(const std::string& msg) : Error(msg) {}
};

// An identically-zero field where a normalizable one is required.
struct ZeroFunctionError : Error {
    explicit ZeroFunctionError(const std::string& msg) : Error(msg) {}
};

// Decay exponent kappa = sqrt(V_asym - E) has no Re > 0 branch.
struct BranchError : Error {
    explicit BranchError(const std::string& msg) : Error(msg) {}
};

// |M22| ~ 0: the scattering matrix blows up at this momentum.
struct SpectralSingularityError : Error {
    explicit SpectralSingularityError(const std::string& msg) : Error(msg) {}
};

// A closed-form denominator vanished where it must not.
struct DegenerateDenominatorError : Error {
    explicit DegenerateDenominatorError(const std::string& msg) : Error(msg) {}
};

// Phase classification asked of an empty spectrum.
struct EmptySpectrumError : Error {
    explicit EmptySpectrumError(const std::string& msg) : Error(msg) {}
};

} // namespace ptlab
