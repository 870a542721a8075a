#pragma once

#include <stdexcept>
#include <string>

namespace floergrid {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    int line, col;
    ParseError(int line_, int col_, const std::string& what)
        : Error("line " + std::to_string(line_) + ", col " + std::to_string(col_) + ": " + what),
          line(line_), col(col_) {}
};

struct InvalidGrid : Error { using Error::Error; };
struct IllegalMove : Error { using Error::Error; };
struct SizeCapExceeded : Error { using Error::Error; };
struct WindowError : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NotCommutationPair : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
// step is 1-based; 0 means the script as a whole.
struct ScriptError : Error {
    int step;
    ScriptError(int step_, const std::string& what)
        : Error(step_ ? "step " + std::to_string(step_) + ": " + what : what), step(step_) {}
};

} // namespace floergrid
