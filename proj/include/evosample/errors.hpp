#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evosample {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad CLI flags or config-file contents.
struct ConfigError : Error {
    using Error::Error;
};

// Malformed input document; line is 1-based, 0 when unknown.
struct ParseError : Error {
    explicit ParseError(const std::string& msg, std::size_t line_no = 0)
        : Error(line_no ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
    std::size_t line;
};

// Violated operation precondition or data invariant.
struct ValidationError : Error {
    using Error::Error;
};

// A pipeline stage failed; message names the stage.
struct PipelineError : Error {
    using Error::Error;
};

// Program evaluation produced a non-finite intermediate.
struct EvalError : Error {
    using Error::Error;
};

}  // namespace evosample
