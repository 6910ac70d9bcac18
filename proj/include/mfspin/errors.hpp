#ifndef MFSPIN_ERRORS_HPP
#define MFSPIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mfspin {

// Invalid model parameters, malformed samples or configs. CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad command line or config file input. CLI exit code 2.
class UsageError : public ValidationError {
public:
    explicit UsageError(const std::string& msg) : ValidationError(msg) {}
};

// Solver non-convergence, singular systems, degenerate estimators. Exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Enumeration or memory budgets exceeded. CLI exit code 4.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mfspin

#endif
