#pragma once

#include <stdexcept>
#include <string>

namespace pccc {

enum class ErrorCode {
    // validation-type failures (bad inputs, bad files, bad arguments)
    invalid_argument,
    parse_error,
    missing_file,
    duplicate_id,
    invalid_ground_truth,
    version_mismatch,
    corrupt_file,
    // computation-type failures (valid inputs, degenerate data)
    singular_matrix,
    empty_mask,
    zero_vector,
    zero_component,
    invalid_depth,
    empty_cloud,
    all_saturated,
    zero_mean,
    zero_gradient_energy,
    shape_mismatch,
    non_finite,
    stale_trace,
    empty_split,
    empty_dataset,
    divergence,
    no_visible_surface,
    io_error,
};

// True for errors caused by malformed user input rather than degenerate data.
inline bool is_validation_error(ErrorCode c) {
    switch (c) {
    case ErrorCode::invalid_argument:
    case ErrorCode::parse_error:
    case ErrorCode::missing_file:
    case ErrorCode::duplicate_id:
    case ErrorCode::invalid_ground_truth:
    case ErrorCode::version_mismatch:
    case ErrorCode::corrupt_file:
        return true;
    default:
        return false;
    }
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace pccc
