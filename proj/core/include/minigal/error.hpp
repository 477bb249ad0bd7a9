#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace minigal {

// Every error raised by the library derives from this.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
struct precondition_error : error {
    using error::error;
};

// Arithmetic between objects living at different (ell, level) or in
// different characteristics.
struct level_mismatch : error {
    using error::error;
};

struct division_by_zero : error {
    using error::error;
};

// The cancellation principle was invoked outside its hypotheses. Kept
// distinct from a `false` answer so that sweeps cannot confuse the two.
struct cancellation_precondition : precondition_error {
    using precondition_error::precondition_error;
};

struct parse_error : error {
    parse_error(std::string const& what, std::size_t line, std::size_t column)
        : error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          message(what), line(line), column(column) {}
    std::string message;
    std::size_t line;
    std::size_t column;
};

}  // namespace minigal
