#ifndef WICKLAB_ERRORS_HPP
#define WICKLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wicklab {

// Bad user input: config files, dimension mismatches, malformed specs.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally invalid model data (e.g. a two-point matrix that is not
// of positive type, or a degenerate quotient).
struct model_error : std::runtime_error {
    explicit model_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A stated precondition of an operation does not hold.
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An operator application or compression would read a block that the
// particle-number cutoff has corrupted.  Never silently projected.
struct truncation_error : std::runtime_error {
    explicit truncation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Spectral operations: singular resolvent shifts, bad projection intervals.
struct spectral_error : std::runtime_error {
    explicit spectral_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace wicklab

#endif
