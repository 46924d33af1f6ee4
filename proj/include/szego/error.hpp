#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace szego {

enum class ErrorCode {
    InvalidParams,
    ZeroOnCircle,
    GridTooCoarse,
    NonzeroWinding,
    TailNotResolved,
    NearSingular,
    IndexOutOfRange,
    BadSpec,
    SeriesDiverges,
    WindowTooSmall,
    InsufficientData,
    Internal,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the sweep driver in particular) can tell a failed hypothesis from a
/// broken computation.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace szego
