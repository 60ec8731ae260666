#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wgqed {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs outside an operation's domain (invalid mode index, cutoff branch, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Complex pole with beta_r = 0: the requested frequency is below cutoff with no damping.
class PurelyEvanescentError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Iterative procedure did not reach its tolerance. Carries the last iterates.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> trace)
        : Error(what), trace_(std::move(trace)) {}
    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

/// Bracketed root search found no sign change.
class NoCrossingError : public Error {
public:
    NoCrossingError(const std::string& what, double lo_value, double hi_value)
        : Error(what), lo_value_(lo_value), hi_value_(hi_value) {}
    double lo_value() const noexcept { return lo_value_; }
    double hi_value() const noexcept { return hi_value_; }

private:
    double lo_value_;
    double hi_value_;
};

}  // namespace wgqed
