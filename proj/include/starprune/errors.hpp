#pragma once

#include <stdexcept>
#include <string>

namespace starprune {

// Error taxonomy used across the library. Callers that need to map failures
// to exit codes (the CLI) or Python exceptions switch on these types;
// plain std::invalid_argument is used for bad argument values.

struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

struct StateError : std::runtime_error {
    explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace starprune
