#pragma once

#include <stdexcept>
#include <string>

namespace cslfa {

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A symbol or diagonal that would have to be inverted is numerically zero.
class ResonanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No shift up to the bracket ceiling satisfied the search predicate.
class BracketError : public std::runtime_error {
public:
    BracketError(const std::string& what, double ceiling)
        : std::runtime_error(what), ceiling_(ceiling) {}
    double ceiling() const noexcept { return ceiling_; }

private:
    double ceiling_;
};

class EstimateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cslfa
