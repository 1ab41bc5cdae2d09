#include "rcausal/error.hpp"

namespace rcausal {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::DuplicateName: return "DuplicateName";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::DegenerateBins: return "DegenerateBins";
        case ErrorCode::EmptyHistogram: return "EmptyHistogram";
        case ErrorCode::LagTooLarge: return "LagTooLarge";
        case ErrorCode::SingularDesign: return "SingularDesign";
        case ErrorCode::UnknownFormat: return "UnknownFormat";
        case ErrorCode::VariableMismatch: return "VariableMismatch";
        case ErrorCode::WindowTooLong: return "WindowTooLong";
        case ErrorCode::TooManyWindows: return "TooManyWindows";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

}  // namespace rcausal
