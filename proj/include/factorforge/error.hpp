#pragma once

#include <stdexcept>
#include <string>

namespace factorforge {

// Error categories. The names returned by error_code_name() are the
// machine-readable strings the CLI prints on failure.
enum class ErrorCode {
    invalid_input,
    invalid_argument,
    rank_deficiency,
    io_error,
    format_error,
    empty_category,
    empty_data,
    budget_exhausted,
    no_convergence,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace factorforge
