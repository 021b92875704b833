#include "factorforge/error.hpp"

namespace factorforge {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::rank_deficiency: return "rank-deficiency";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::format_error: return "format-error";
    case ErrorCode::empty_category: return "empty-category";
    case ErrorCode::empty_data: return "empty-data";
    case ErrorCode::budget_exhausted: return "budget-exhausted";
    case ErrorCode::no_convergence: return "no-convergence";
    }
    return "unknown";
}

} // namespace factorforge
