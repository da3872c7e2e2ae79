#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace webeco {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (URLs, dates, CSV/JSON records).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A precondition on an argument was violated.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A metric is undefined for the given input (empty sets, zero variance).
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

/// A design or covariance matrix could not be inverted.
class SingularityError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::size_t iterations)
        : Error(what + " (after " + std::to_string(iterations) + " iterations)"),
          iterations_(iterations) {}

    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

/// No differencing order up to the limit made the series pass both unit-root tests.
class StationarityError : public Error {
public:
    StationarityError(const std::string& series, const std::string& what)
        : Error(series.empty() ? what : series + ": " + what), series_(series) {}

    const std::string& series() const noexcept { return series_; }

private:
    std::string series_;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

}  // namespace webeco
