#ifndef NELSON_ERRORS_HPP
#define NELSON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nelson {

// Bad user input: malformed config, out-of-range parameters, impossible
// geometry. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Runtime numerical failure (solver breakdown, non-finite state). Exit code 1.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Argument outside a function's mathematical domain.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what_arg) : std::invalid_argument(what_arg) {}
};

} // namespace nelson

#endif
