#pragma once

#include <stdexcept>
#include <string>

namespace nrmlab {

/// Failure categories used across the library.  Every throwing operation
/// documents which of these it can raise; tests and the C binding dispatch
/// on the code rather than on message text.
enum class Errc {
    DimensionMismatch,         ///< arrays that must agree in length do not
    NonpositiveRate,           ///< a quantity that must be > 0 is <= 0
    NegativeCapacity,          ///< a quantity that must be >= 0 is negative
    ZeroColumn,                ///< a demand class consumes no resource at all
    ParseError,                ///< malformed JSON / unknown or missing key
    SolutionInstanceMismatch,  ///< solution vector does not fit the instance
    NumericalFailure,          ///< solver safeguard tripped (cycling, singularity)
    TooLarge,                  ///< input exceeds a guarded brute-force limit
    WindowOutOfRange,          ///< query window leaves [0, horizon]
    HorizonTooShort,           ///< horizon too short to build a resolve schedule
    ParameterOutOfRange,       ///< scalar argument outside its documented domain
    NonpositiveRegret,         ///< log-log fit has too few positive points
    InvalidArgument,           ///< anything else the caller got wrong
    IoError,                   ///< file could not be read or written
};

/// Stable identifier string for an Errc (e.g. "ZeroColumn").
const char* errc_name(Errc code) noexcept;

/// Exception carrying an Errc plus a human-readable message.  what() is
/// prefixed with the code name, so logs stay grep-able.
class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

}  // namespace nrmlab
