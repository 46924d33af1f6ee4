#include "szego/error.hpp"

namespace szego {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::ZeroOnCircle: return "ZeroOnCircle";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::NonzeroWinding: return "NonzeroWinding";
        case ErrorCode::TailNotResolved: return "TailNotResolved";
        case ErrorCode::NearSingular: return "NearSingular";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::BadSpec: return "BadSpec";
        case ErrorCode::SeriesDiverges: return "SeriesDiverges";
        case ErrorCode::WindowTooSmall: return "WindowTooSmall";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace szego
