#include "nrmlab/errors.hpp"

namespace nrmlab {

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::NonpositiveRate: return "NonpositiveRate";
        case Errc::NegativeCapacity: return "NegativeCapacity";
        case Errc::ZeroColumn: return "ZeroColumn";
        case Errc::ParseError: return "ParseError";
        case Errc::SolutionInstanceMismatch: return "SolutionInstanceMismatch";
        case Errc::NumericalFailure: return "NumericalFailure";
        case Errc::TooLarge: return "TooLarge";
        case Errc::WindowOutOfRange: return "WindowOutOfRange";
        case Errc::HorizonTooShort: return "HorizonTooShort";
        case Errc::ParameterOutOfRange: return "ParameterOutOfRange";
        case Errc::NonpositiveRegret: return "NonpositiveRegret";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace nrmlab
