#pragma once

#include <stdexcept>
#include <string>

namespace dnscatter {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad physical or numerical input (n = 0, y outside [0,d], N <= n1, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// k lies on (or within the configured margin of) a channel threshold.
class ThresholdDegenerate : public InvalidArgument {
public:
    ThresholdDegenerate(const std::string& what, double threshold)
        : InvalidArgument(what), threshold_(threshold) {}
    double threshold() const noexcept { return threshold_; }

private:
    double threshold_;
};

// A momentum window [alpha, beta] crosses a threshold or k = 0.
class WindowViolation : public InvalidArgument {
public:
    WindowViolation(const std::string& what, double threshold)
        : InvalidArgument(what), threshold_(threshold) {}
    double threshold() const noexcept { return threshold_; }

private:
    double threshold_;
};

class SolveFailed : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class QuadratureFailed : public Error {
public:
    using Error::Error;
};

class QuadratureUnderResolved : public Error {
public:
    using Error::Error;
};

class GridTooSmall : public Error {
public:
    using Error::Error;
};

}  // namespace dnscatter
