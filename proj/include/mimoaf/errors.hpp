#pragma once

// Exception types thrown by the library. Everything derives from a standard
// exception so callers that do not care about the category can catch
// std::invalid_argument / std::domain_error / std::runtime_error.

#include <stdexcept>
#include <string>

namespace mimoaf
{
    // Non-positive durations, empty inputs, malformed enum values, ...
    struct invalid_parameter : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    // Two signals (or surfaces) that do not share a sampling grid.
    struct grid_mismatch : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    // A delay or Doppler value that is not an integer multiple of the grid step.
    struct grid_alignment_error : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    // Operation would push signal content past the Nyquist frequency.
    struct aliasing_error : std::domain_error
    {
        using std::domain_error::domain_error;
    };

    // Mathematical hypothesis of an identity is not met (e.g. non-integer gamma).
    struct precondition_error : std::domain_error
    {
        using std::domain_error::domain_error;
    };

    // Two independently computed routes disagree beyond their tolerance.
    struct numeric_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Unreadable or malformed SIG1 / SUR1 / CSV input.
    struct format_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };
}
