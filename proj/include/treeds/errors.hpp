#pragma once

#include <stdexcept>
#include <string>

namespace treeds {

// Bad call: wrong vertex, non-leaf argument, precondition broken by the caller.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input data that does not have the shape an operation relies on.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    std::string pointer;
    ParseError(std::string ptr, const std::string& msg)
        : std::runtime_error(ptr + ": " + msg), pointer(std::move(ptr)) {}
};

}  // namespace treeds
