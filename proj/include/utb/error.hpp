#pragma once
#include <stdexcept>
#include <string>

namespace utb {

// Error categories. The CLI maps Config/Unsupported to exit code 2 and
// everything else to exit code 1.
enum class ErrorKind {
    Config,       // invalid parameter or flag value
    Validation,   // dataset or model violates an invariant
    Parse,        // malformed input file
    Io,           // filesystem failure
    Shape,        // dimension mismatch between model and data
    Unsupported,  // well-formed request the engine does not support
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace utb
