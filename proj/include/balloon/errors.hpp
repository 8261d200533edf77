#pragma once

#include <stdexcept>
#include <string>

namespace balloon {

// Base class for computational failures. Precondition/usage violations use
// std::invalid_argument or std::domain_error instead.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// No sign change over the supplied bracket.
class BracketError : public Error {
public:
    using Error::Error;
};

// Integrand is not integrable (worse than an inverse-square-root endpoint).
class DivergenceError : public Error {
public:
    using Error::Error;
};

// Requested curvature lies outside the band where the implicit radicand is positive.
class UnreachableCurvatureError : public Error {
public:
    using Error::Error;
};

// State has |k| below the degeneracy threshold; lambda (or k1) is undefined there.
class DegenerateStateError : public Error {
public:
    using Error::Error;
};

// Curvature changes sign inside an interval that must be one-signed.
class SignChangeError : public Error {
public:
    using Error::Error;
};

// The radicand has no positive root: the trajectory never has k' = 0.
class NoEquatorError : public Error {
public:
    using Error::Error;
};

// Arc construction degenerates to the trivial solution (or zero length).
class DegenerateArcError : public Error {
public:
    using Error::Error;
};

// Two independent computation routes disagree beyond the allowed slack.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// A 1-D solve has no root in the scanned family; carries the achievable range.
class NoSolutionError : public Error {
public:
    NoSolutionError(const std::string& what, double lo, double hi)
        : Error(what), achievable_lo(lo), achievable_hi(hi) {}
    double achievable_lo;
    double achievable_hi;
};

}  // namespace balloon
