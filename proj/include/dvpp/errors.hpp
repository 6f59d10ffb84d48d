#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dvpp {

// Invalid physical or numerical parameter (non-positive reactance, H <= 0, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Reference to a node id that is not declared in the topology.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Operation applied to the wrong node kind (DVPP-only op on an SG node, or vice versa).
class KindError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A state or intermediate signal became non-finite during integration.
class NumericFault : public std::runtime_error {
public:
    NumericFault(std::size_t step, std::string signal)
        : std::runtime_error("non-finite value in '" + signal + "' at step " + std::to_string(step)),
          step_(step), signal_(std::move(signal)) {}

    std::size_t step() const noexcept { return step_; }
    const std::string& signal() const noexcept { return signal_; }

private:
    std::size_t step_;
    std::string signal_;
};

// Aggregated list of semantic violations found while validating a scenario.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "scenario validation failed:";
        for (const auto& s : v) out += "\n  - " + s;
        return out;
    }
    std::vector<std::string> violations_;
};

// Malformed config text; line and column are 1-based.
class ConfigParseError : public std::runtime_error {
public:
    ConfigParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error("parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dvpp
