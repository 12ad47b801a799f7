#pragma once

#include <stdexcept>
#include <string>

namespace heatgraph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: wrong dimensions, bad indices, invalid files or parameters.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The configuration is well formed but cannot yield a unique estimate
/// (too few equations, rank-deficient operator).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

class RankDeficientError : public InfeasibleError {
public:
    RankDeficientError(const std::string& what, long rank, long columns)
        : InfeasibleError(what), rank_(rank), columns_(columns) {}

    long rank() const noexcept { return rank_; }
    long columns() const noexcept { return columns_; }

private:
    long rank_;
    long columns_;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace heatgraph
