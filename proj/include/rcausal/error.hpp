#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rcausal {

enum class ErrorCode {
    InvalidArgument,
    LengthMismatch,
    NonFinite,
    DuplicateName,
    TooShort,
    ZeroVariance,
    DegenerateBins,
    EmptyHistogram,
    LagTooLarge,
    SingularDesign,
    UnknownFormat,
    VariableMismatch,
    WindowTooLong,
    TooManyWindows,
    Io,
    Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can report it in machine-readable form.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace rcausal
