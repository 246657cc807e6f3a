#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kerrlab {

enum class ErrorKind {
    cutoff_too_small,
    index_out_of_range,
    layout_conflict,
    not_unitary,
    dimension_mismatch,
    zero_probability,
    not_normalized,
    grid_too_coarse,
    insufficient_phases,
    non_convergence,
    invalid_argument,
    config_invalid,
    parse_error,
    io_error,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` tells callers which contract failed.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::cutoff_too_small: return "CutoffTooSmall";
        case ErrorKind::index_out_of_range: return "IndexOutOfRange";
        case ErrorKind::layout_conflict: return "LayoutConflict";
        case ErrorKind::not_unitary: return "NotUnitary";
        case ErrorKind::dimension_mismatch: return "DimensionMismatch";
        case ErrorKind::zero_probability: return "ZeroProbability";
        case ErrorKind::not_normalized: return "NotNormalized";
        case ErrorKind::grid_too_coarse: return "GridTooCoarse";
        case ErrorKind::insufficient_phases: return "InsufficientPhases";
        case ErrorKind::non_convergence: return "NonConvergence";
        case ErrorKind::invalid_argument: return "InvalidArgument";
        case ErrorKind::config_invalid: return "ConfigInvalid";
        case ErrorKind::parse_error: return "ParseError";
        case ErrorKind::io_error: return "IOError";
    }
    return "Unknown";
}

}  // namespace kerrlab
